#include "dissrel/kernels.hpp"

#include <exception>
#include <mutex>

namespace dissrel::kernels {

void for_each_index(Exec exec, std::size_t n, const std::function<void(std::size_t)>& body) {
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr first;
  std::mutex guard;
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(guard);
      if (!first) first = std::current_exception();
    }
  }
  if (first) std::rethrow_exception(first);
}

void wave_rhs_serial(std::span<const double> y, std::size_t nx, double inv_dx2, double mass,
                     std::span<double> dy) {
  const double* re = y.data();
  const double* im = y.data() + nx;
  const double* re_t = y.data() + 2 * nx;
  const double* im_t = y.data() + 3 * nx;
  for (std::size_t j = 0; j < nx; ++j) {
    const std::size_t jl = j == 0 ? nx - 1 : j - 1;
    const std::size_t jr = j + 1 == nx ? 0 : j + 1;
    dy[j] = re_t[j];
    dy[nx + j] = im_t[j];
    dy[2 * nx + j] = (re[jl] - 2.0 * re[j] + re[jr]) * inv_dx2 - mass * re[j];
    dy[3 * nx + j] = (im[jl] - 2.0 * im[j] + im[jr]) * inv_dx2 - mass * im[j];
  }
}

void wave_rhs_parallel(std::span<const double> y, std::size_t nx, double inv_dx2, double mass,
                       std::span<double> dy) {
  const double* re = y.data();
  const double* im = y.data() + nx;
  const double* re_t = y.data() + 2 * nx;
  const double* im_t = y.data() + 3 * nx;
  const auto n = static_cast<long long>(nx);
#pragma omp parallel for schedule(static)
  for (long long jj = 0; jj < n; ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    const std::size_t jl = j == 0 ? nx - 1 : j - 1;
    const std::size_t jr = j + 1 == nx ? 0 : j + 1;
    dy[j] = re_t[j];
    dy[nx + j] = im_t[j];
    dy[2 * nx + j] = (re[jl] - 2.0 * re[j] + re[jr]) * inv_dx2 - mass * re[j];
    dy[3 * nx + j] = (im[jl] - 2.0 * im[j] + im[jr]) * inv_dx2 - mass * im[j];
  }
}

void wave_rhs(Exec exec, std::span<const double> y, std::size_t nx, double inv_dx2, double mass,
              std::span<double> dy) {
  if (exec == Exec::serial) {
    wave_rhs_serial(y, nx, inv_dx2, mass, dy);
  } else {
    wave_rhs_parallel(y, nx, inv_dx2, mass, dy);
  }
}

void assemble_field_serial(std::span<const std::complex<double>> f, std::span<const double> xs,
                           double k, int sign, std::span<std::complex<double>> out) {
  const std::size_t nx = xs.size();
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = 0; j < nx; ++j) {
      out[i * nx + j] = f[i] * std::polar(1.0, sign * k * xs[j]);
    }
  }
}

void assemble_field_parallel(std::span<const std::complex<double>> f, std::span<const double> xs,
                             double k, int sign, std::span<std::complex<double>> out) {
  const std::size_t nx = xs.size();
  const auto nt = static_cast<long long>(f.size());
#pragma omp parallel for schedule(static)
  for (long long ii = 0; ii < nt; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    for (std::size_t j = 0; j < nx; ++j) {
      out[i * nx + j] = f[i] * std::polar(1.0, sign * k * xs[j]);
    }
  }
}

std::complex<double> mode_amplitude(std::span<const double> re, std::span<const double> im,
                                    std::span<const double> xs, double k, int sign) {
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t j = 0; j < xs.size(); ++j) {
    acc += std::complex<double>(re[j], im[j]) * std::polar(1.0, -sign * k * xs[j]);
  }
  return acc / static_cast<double>(xs.size());
}

}  // namespace dissrel::kernels
