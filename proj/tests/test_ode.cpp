#include <doctest.h>

#include <cmath>
#include <vector>

#include "dissrel/errors.hpp"
#include "dissrel/ode.hpp"

using namespace dissrel;

TEST_CASE("exponential decay matches exp(-t)") {
  OdeOptions opt;
  opt.rtol = 1e-10;
  opt.atol = 1e-14;
  DormandPrince dp([](double, std::span<const double> y, std::span<double> dy) { dy[0] = -y[0]; }, 1, opt);
  std::vector<double> y = {1.0};
  const auto st = dp.integrate(0.0, y, 5.0);
  CHECK(std::abs(y[0] - std::exp(-5.0)) < 1e-11);
  CHECK(st.accepted > 0);
  CHECK(st.max_error_ratio <= 1.0);
}

TEST_CASE("dense output reproduces sin t between steps") {
  OdeOptions opt;
  opt.rtol = 1e-10;
  opt.atol = 1e-13;
  const auto outs = linspace(0.0, 10.0, 1001);
  // y = (sin t, cos t)
  const auto sol = solve_sampled(
      [](double, std::span<const double> y, std::span<double> dy) {
        dy[0] = y[1];
        dy[1] = -y[0];
      },
      std::vector<double>{0.0, 1.0}, 0.0, 10.0, outs, opt, false);
  REQUIRE(sol.size() == outs.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < sol.size(); ++i) {
    CHECK(sol.t[i] == outs[i]);
    worst = std::max(worst, std::abs(sol.row(i)[0] - std::sin(outs[i])));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("solve_sampled merges steps and keeps times increasing") {
  OdeOptions opt;
  opt.rtol = 1e-8;
  const std::vector<double> outs = {0.5, 1.0, 1.5};
  const auto sol = solve_sampled([](double, std::span<const double>, std::span<double> dy) { dy[0] = 1.0; },
                                 std::vector<double>{0.0}, 0.0, 2.0, outs, opt, true);
  CHECK(sol.t.front() == 0.0);
  CHECK(sol.t.back() == 2.0);
  for (std::size_t i = 1; i < sol.size(); ++i) CHECK(sol.t[i] > sol.t[i - 1]);
  CHECK(std::abs(sol.row(sol.size() - 1)[0] - 2.0) < 1e-12);
}

TEST_CASE("guard rejections halve the step") {
  OdeOptions opt;
  opt.rtol = 1e-6;
  opt.h_init = 1.0;
  int calls = 0;
  opt.guard = [&](double t, std::span<const double>) { return ++calls < 3 && t > 0.5; };
  DormandPrince dp([](double, std::span<const double>, std::span<double> dy) { dy[0] = 1.0; }, 1, opt);
  std::vector<double> y = {0.0};
  const auto st = dp.integrate(0.0, y, 2.0);
  CHECK(st.guard_rejections >= 1);
  CHECK(std::abs(y[0] - 2.0) < 1e-12);
}

TEST_CASE("an unsatisfiable guard ends in StepFailure") {
  OdeOptions opt;
  opt.guard = [](double t, std::span<const double>) { return t > 1.0; };
  DormandPrince dp([](double, std::span<const double>, std::span<double> dy) { dy[0] = 1.0; }, 1, opt);
  std::vector<double> y = {0.0};
  CHECK_THROWS_AS(dp.integrate(0.0, y, 2.0), StepFailure);
}

TEST_CASE("non-finite trial states are rejected") {
  // dy/dt = 1 / (1 - t) blows up at t = 1.
  OdeOptions opt;
  opt.rtol = 1e-8;
  DormandPrince dp([](double t, std::span<const double>, std::span<double> dy) { dy[0] = 1.0 / (1.0 - t); }, 1, opt);
  std::vector<double> y = {0.0};
  CHECK_THROWS_AS(dp.integrate(0.0, y, 2.0), StepFailure);
}

TEST_CASE("bad tolerances are refused") {
  OdeOptions opt;
  opt.rtol = 0.0;
  CHECK_THROWS(DormandPrince([](double, std::span<const double>, std::span<double>) {}, 1, opt));
}

TEST_CASE("linspace endpoints are exact") {
  const auto v = linspace(0.55, 0.95, 81);
  CHECK(v.front() == 0.55);
  CHECK(v.back() == 0.95);
  CHECK(v.size() == 81);
}
