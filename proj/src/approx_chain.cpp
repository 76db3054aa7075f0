#include "dissrel/approx_chain.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dissrel/csv.hpp"
#include "dissrel/errors.hpp"

namespace dissrel {

namespace {

constexpr double kBracketLo = 1e-9;
constexpr double kBracketHi = 1.0 - 1e-12;
constexpr double kQuadTol = 1e-10;

double implicit_fn(double xi, double rhs) { return xi * std::atanh(xi) - 1.0 - rhs * xi; }

}  // namespace

double xi_exact(double t, double gamma, double constant) {
  if (!(t >= 0.0)) throw DomainError("xi_exact: t >= 0 violated");
  if (!(gamma > 0.0)) throw DomainError("xi_exact: gamma > 0 violated");
  const double rhs = gamma * t + constant;
  double lo = kBracketLo, hi = kBracketHi;
  double flo = implicit_fn(lo, rhs);
  const double fhi = implicit_fn(hi, rhs);
  if (!(flo < 0.0 && fhi > 0.0)) {
    std::ostringstream msg;
    msg << "xi_exact: no sign change on (" << lo << ", " << hi << ") for gamma t + C = " << rhs;
    throw NoRootError(msg.str());
  }
  // Run to adjacent doubles: a 1e-12 stopping width leaves jitter that the
  // adaptive quadrature of xi reads as non-smoothness on short intervals.
  for (;;) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = implicit_fn(mid, rhs);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double implicit_solution_residual(double t, double v, double gamma) {
  const double av = std::abs(v);
  const double xi = std::sqrt((1.0 - av) * (1.0 + av));
  // atanh(xi) = ln((1 + xi) / |v|) since 1 - xi^2 = v^2
  const double at = std::log((1.0 + xi) / av);
  return std::abs(-gamma * t - (1.0 - xi * at) / xi);
}

QuadraticRoots xi_quadratic(double t, double gamma) {
  if (!(t > 0.0)) throw DomainError("xi_quadratic: t > 0 violated");
  if (!(gamma > 0.0)) throw DomainError("xi_quadratic: gamma > 0 violated");
  const double g = gamma * t;
  QuadraticRoots r;
  r.plus = 0.5 * g * (1.0 + std::sqrt(1.0 + (2.0 / g) * (2.0 / g)));
  // Product of the roots is -1; avoids cancellation in 1 - sqrt(...).
  r.minus = -1.0 / r.plus;
  return r;
}

double quadratic_residual(double xi, double gamma_t) {
  const double scale = std::max({xi * xi, std::abs(gamma_t * xi), 1.0});
  return std::abs(xi * xi - gamma_t * xi - 1.0) / scale;
}

bool in_validity_window(double t, double gamma) { return gamma > 0.0 && 2.0 / gamma < t && t < 1.0; }

TauLog tau_log(double t, double gamma) {
  if (!(t > 0.0)) throw DomainError("tau_log: t > 0 violated");
  if (!(gamma > 0.0)) throw DomainError("tau_log: gamma > 0 violated");
  return TauLog{-std::log(t) / gamma, in_validity_window(t, gamma)};
}

double truncation_error(double xi) {
  const double a = std::atanh(xi);
  return std::abs(a - (xi + xi * xi * xi / 3.0)) / a;
}

ApproxChainReport approx_chain_report(double gamma, const std::vector<double>& t_grid, Exec exec) {
  if (!(gamma > 0.0)) throw DomainError("approx_chain_report: gamma > 0 violated");
  if (t_grid.empty()) throw GridError("approx_chain_report: empty grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0) || (i > 0 && !(t_grid[i] > t_grid[i - 1]))) {
      throw GridError("approx_chain_report: grid must be positive and increasing");
    }
  }

  const std::size_t n = t_grid.size();
  ApproxChainReport r;
  r.gamma = gamma;
  r.t = t_grid;
  r.xi_exact.resize(n);
  r.xi_quad_minus.resize(n);
  r.xi_quad_plus.resize(n);
  r.tau_exact.resize(n);
  r.tau_log.resize(n);
  r.err_xi.resize(n);
  r.err_tau.resize(n);
  r.in_window.resize(n);
  r.truncation.resize(n);
  std::vector<double> piece(n);
  std::vector<double> quad_res(n);

  auto xi_of = [gamma](double s) { return xi_exact(s, gamma); };
  kernels::for_each_index(exec, n, [&](std::size_t i) {
    const double t = t_grid[i];
    r.xi_exact[i] = xi_exact(t, gamma);
    const auto roots = xi_quadratic(t, gamma);
    r.xi_quad_minus[i] = roots.minus;
    r.xi_quad_plus[i] = roots.plus;
    quad_res[i] = std::max(quadratic_residual(roots.minus, gamma * t),
                           quadratic_residual(roots.plus, gamma * t));
    const auto tl = tau_log(t, gamma);
    r.tau_log[i] = tl.value;
    r.in_window[i] = tl.in_window ? 1 : 0;
    r.truncation[i] = truncation_error(r.xi_exact[i]);
    const double a = i == 0 ? 0.0 : t_grid[i - 1];
    piece[i] = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(xi_of, a, t, 15, kQuadTol);
  });

  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += piece[i];
    r.tau_exact[i] = acc;
    r.err_xi[i] = std::abs(r.xi_quad_minus[i] - r.xi_exact[i]);
    r.err_tau[i] = std::abs(r.tau_log[i] - r.tau_exact[i]);
    r.negative_branch = r.negative_branch || (r.xi_quad_minus[i] < 0.0 && r.xi_exact[i] > 0.0);
    r.max_quadratic_residual = std::max(r.max_quadratic_residual, quad_res[i]);
  }
  r.window_empty = gamma <= 2.0;
  return r;
}

void write_approx_csv(std::ostream& os, const ApproxChainReport& r) {
  csv::header(os, {"t", "xi_exact", "xi_quad_minus", "xi_quad_plus", "tau_exact", "tau_log", "err_xi",
                   "err_tau", "in_window"});
  for (std::size_t i = 0; i < r.t.size(); ++i) {
    csv::row(os, r.t[i], r.xi_exact[i], r.xi_quad_minus[i], r.xi_quad_plus[i], r.tau_exact[i],
             r.tau_log[i], r.err_xi[i], r.err_tau[i], r.in_window[i] ? "true" : "false");
  }
}

}  // namespace dissrel
