#include "dissrel/finite_diff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dissrel {

std::vector<double> fd_weights(double x0, std::span<const double> xs, int m) {
  const std::size_t n = xs.size();
  if (n == 0 || m < 0 || static_cast<std::size_t>(m) >= n) {
    throw std::invalid_argument("fd_weights: need more nodes than the derivative order");
  }
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  c[0][0] = 1.0;
  double c1 = 1.0;
  double c4 = xs[0] - x0;
  for (std::size_t i = 1; i < n; ++i) {
    const int mn = std::min(static_cast<int>(i), m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = xs[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = xs[i] - xs[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        }
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = c[j][m];
  return w;
}

std::vector<double> fd_derivative(std::span<const double> xs, std::span<const double> ys, int m,
                                  std::size_t width) {
  const std::size_t n = xs.size();
  if (ys.size() != n) throw std::invalid_argument("fd_derivative: size mismatch");
  if (n < width || width <= static_cast<std::size_t>(m)) {
    throw std::invalid_argument("fd_derivative: too few samples for the stencil");
  }
  std::vector<double> out(n);
  const std::size_t half = width / 2;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t lo = i >= half ? i - half : 0;
    lo = std::min(lo, n - width);
    const auto w = fd_weights(xs[i], xs.subspan(lo, width), m);
    // Weights of a derivative sum to zero, so differencing against ys[i] is
    // exact for constant data.
    double acc = 0.0;
    for (std::size_t j = 0; j < width; ++j) acc += w[j] * (ys[lo + j] - (m > 0 ? ys[i] : 0.0));
    out[i] = acc;
  }
  return out;
}

double central_diff(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

double fd_step(double scale) {
  return std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(std::abs(scale), 1e-300);
}

bool is_uniform(std::span<const double> xs, double rel_tol) {
  if (xs.size() < 2) return true;
  const double h = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
  if (!(h > 0.0)) return false;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (std::abs((xs[i] - xs[i - 1]) - h) > rel_tol * h) return false;
  }
  return true;
}

}  // namespace dissrel
