#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>
#include <vector>

#include "dissrel/approx_chain.hpp"
#include "dissrel/inverse.hpp"
#include "dissrel/kernels.hpp"
#include "dissrel/modes.hpp"
#include "dissrel/ode.hpp"

using namespace dissrel;

namespace {

Exec exec_of(const benchmark::State& st) { return st.range(1) == 0 ? Exec::serial : Exec::parallel; }

void BM_wave_rhs(benchmark::State& st) {
  const auto nx = static_cast<std::size_t>(st.range(0));
  std::vector<double> y(4 * nx), dy(4 * nx);
  for (std::size_t j = 0; j < y.size(); ++j) y[j] = std::sin(0.01 * static_cast<double>(j));
  const Exec e = exec_of(st);
  for (auto _ : st) {
    kernels::wave_rhs(e, y, nx, 1.0e4, 2.0, dy);
    benchmark::DoNotOptimize(dy.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(nx));
}
BENCHMARK(BM_wave_rhs)->ArgsProduct({{256, 4096, 65536}, {0, 1}});

void BM_assemble_field(benchmark::State& st) {
  const auto nt = static_cast<std::size_t>(st.range(0));
  std::vector<std::complex<double>> f(nt, {0.3, -0.7});
  const auto xs = linspace(0.0, 6.28, 256);
  std::vector<std::complex<double>> out(nt * xs.size());
  for (auto _ : st) {
    if (exec_of(st) == Exec::serial) {
      kernels::assemble_field_serial(f, xs, 1.0, 1, out);
    } else {
      kernels::assemble_field_parallel(f, xs, 1.0, 1, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_assemble_field)->ArgsProduct({{64, 1024}, {0, 1}});

void BM_inverse_G(benchmark::State& st) {
  const auto F = ForceSpec::linear_drag(1.0);
  const auto xs = linspace(0.0, 1.0, 21);
  const auto vs = linspace(0.1, 2.0, static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(inverse_G(F, xs, vs, exec_of(st)).values.data());
}
BENCHMARK(BM_inverse_G)->ArgsProduct({{96, 381}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_approx_report(benchmark::State& st) {
  const auto grid = linspace(0.55, 0.95, static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(approx_chain_report(4.0, grid, exec_of(st)).tau_exact.data());
}
BENCHMARK(BM_approx_report)->ArgsProduct({{81, 801}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_mode_analytic(benchmark::State& st) {
  ModeSpec spec;
  const auto grid = linspace(0.1, 10.0, static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(mode_analytic(spec, grid, exec_of(st)).f.data());
}
BENCHMARK(BM_mode_analytic)->ArgsProduct({{101, 1001}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
