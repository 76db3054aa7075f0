#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "dissrel/kernels.hpp"

namespace dissrel {

// xi = sqrt(1 - v^2) solving atanh(xi) - 1/xi = gamma t + constant for the
// free particle under linear drag (c = 1). constant = 0 fixes xi(0) by
// xi atanh(xi) = 1. Bisection on (1e-9, 1 - 1e-12) down to adjacent doubles.
double xi_exact(double t, double gamma, double constant = 0.0);

// |-gamma t - (1 - xi atanh xi) / xi| evaluated from a velocity, with 1 - xi
// formed without cancellation.
double implicit_solution_residual(double t, double v, double gamma);

struct QuadraticRoots {
  double minus = 0.0;  // branch retained by the approximation
  double plus = 0.0;
  double chosen() const { return minus; }
};

// Roots of xi^2 - gamma t xi - 1 = 0.
QuadraticRoots xi_quadratic(double t, double gamma);

// |xi^2 - g xi - 1| / max(xi^2, |g xi|, 1) with g = gamma t.
double quadratic_residual(double xi, double gamma_t);

struct TauLog {
  double value = 0.0;
  bool in_window = false;  // 2/gamma < t < 1
};

// -ln(t) / gamma
TauLog tau_log(double t, double gamma);

bool in_validity_window(double t, double gamma);

// |atanh(xi) - (xi + xi^3/3)| / atanh(xi)
double truncation_error(double xi);

struct ApproxChainReport {
  double gamma = 0.0;
  std::vector<double> t;
  std::vector<double> xi_exact;
  std::vector<double> xi_quad_minus;
  std::vector<double> xi_quad_plus;
  std::vector<double> tau_exact;  // integral of xi_exact from 0
  std::vector<double> tau_log;
  std::vector<double> err_xi;
  std::vector<double> err_tau;
  std::vector<std::uint8_t> in_window;
  std::vector<double> truncation;

  bool window_empty = false;      // gamma <= 2 leaves 2/gamma < t < 1 empty
  bool negative_branch = false;   // chosen root is negative while xi_exact is in (0, 1]
  double max_quadratic_residual = 0.0;
};

ApproxChainReport approx_chain_report(double gamma, const std::vector<double>& t_grid,
                                      Exec exec = Exec::parallel);

// Header `t,xi_exact,xi_quad_minus,xi_quad_plus,tau_exact,tau_log,err_xi,err_tau,in_window`.
void write_approx_csv(std::ostream& os, const ApproxChainReport& report);

}  // namespace dissrel
