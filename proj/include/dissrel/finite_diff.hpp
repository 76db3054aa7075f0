#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace dissrel {

// Fornberg weights for the m-th derivative at x0 from nodes xs.
std::vector<double> fd_weights(double x0, std::span<const double> xs, int m);

// m-th derivative of sampled data at every node, using `width`-point stencils
// (centered where possible, shifted near the ends). Works on non-uniform grids.
std::vector<double> fd_derivative(std::span<const double> xs, std::span<const double> ys, int m,
                                  std::size_t width = 5);

// Second-order central difference of f at x with step h.
double central_diff(const std::function<double(double)>& f, double x, double h);

// Step for first derivatives with second-order stencils: eps^(1/3) * scale.
double fd_step(double scale);

bool is_uniform(std::span<const double> xs, double rel_tol = 1e-9);

}  // namespace dissrel
