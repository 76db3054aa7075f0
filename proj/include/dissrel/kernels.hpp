#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>

namespace dissrel {

// Execution policy for the data-parallel kernels. `serial` is the reference
// path kept for testing; both produce bitwise-identical results.
enum class Exec { serial, parallel };

namespace kernels {

// Runs body(i) for i in [0, n). Under Exec::parallel iterations are spread
// over OpenMP threads and the first exception raised is rethrown afterwards.
void for_each_index(Exec exec, std::size_t n, const std::function<void(std::size_t)>& body);

// Method-of-lines right-hand side of
//   psi_tt = psi_xx - mass * psi
// on a periodic grid. Layout of y and dy: [re psi | im psi | re psi_t | im psi_t],
// each block nx long.
void wave_rhs_serial(std::span<const double> y, std::size_t nx, double inv_dx2, double mass,
                     std::span<double> dy);
void wave_rhs_parallel(std::span<const double> y, std::size_t nx, double inv_dx2, double mass,
                       std::span<double> dy);
void wave_rhs(Exec exec, std::span<const double> y, std::size_t nx, double inv_dx2, double mass,
              std::span<double> dy);

// out[i * nx + j] = f[i] * exp(sign * i * k * xs[j])
void assemble_field_serial(std::span<const std::complex<double>> f, std::span<const double> xs,
                           double k, int sign, std::span<std::complex<double>> out);
void assemble_field_parallel(std::span<const std::complex<double>> f, std::span<const double> xs,
                             double k, int sign, std::span<std::complex<double>> out);

// Discrete projection of one time slice onto exp(sign * i * k * x):
// (1/nx) sum_j psi_j exp(-sign * i * k * x_j).
std::complex<double> mode_amplitude(std::span<const double> re, std::span<const double> im,
                                    std::span<const double> xs, double k, int sign);

}  // namespace kernels
}  // namespace dissrel
