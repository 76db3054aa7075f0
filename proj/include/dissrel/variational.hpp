#pragma once

#include <span>
#include <vector>

#include "dissrel/dynamics.hpp"
#include "dissrel/force.hpp"

namespace dissrel {

// Phase-space point (t, x, p) of the proper-time Hamiltonian.
struct CanonicalState {
  double t = 0.0;
  double x = 0.0;
  double p = 0.0;
  double tau = 0.0;
};

// L = -c^2 e^(gamma tau) sqrt(1 - v^2/c^2) - e^(gamma tau) U(t, x)
double lagrangian_value(double t, double x, double v, double tau, const SimParams& p,
                        const PotentialField& U);

// H = c^2 e^(gamma tau) sqrt(1 + p^2 e^(-2 gamma tau) / c^2) + e^(gamma tau) U(t, x)
double hamiltonian_value(const CanonicalState& cs, const SimParams& p, const PotentialField& U);

// p v - L - H with p the canonical momentum; vanishes to rounding.
double legendre_residual(double t, double x, double v, double tau, const SimParams& p,
                         const PotentialField& U);

// dL/dv by a central difference with h = eps^(1/3) c.
double momentum_from_lagrangian(double t, double x, double v, double tau, const SimParams& p,
                                const PotentialField& U);

// Scaled residuals |dp/dt + e^(gamma tau) dU/dx| / (1 + |p|) at the interior
// samples of a uniformly sampled trajectory (at least 5 samples).
std::vector<double> euler_lagrange_residual(const Trajectory& traj, const PotentialField& U);

// Canonical flow generated by H. The result is expressed in velocity space.
Trajectory hamilton_flow(const CanonicalState& cs0, const SimParams& p, const PotentialField& U,
                         double t_end, double tol, const SamplingOptions& sampling = {});

// Velocity recovered from canonical momentum: q / sqrt(1 + q^2/c^2), q = p e^(-gamma tau).
double velocity_from_momentum(double p_can, double tau, const SimParams& p);

// Caldirola-Kanai Hamiltonian p^2 e^(-gamma t)/2 + e^(gamma t) U + c^2 e^(gamma t).
double ck_hamiltonian(double t, double x, double p_can, const SimParams& params,
                      const PotentialField& U);

// |H - H_CK| / H at time t_eval on the free trajectory started at (0, 0, v0).
double ck_relative_gap(double v0, double gamma, double t_eval, double tol = 1e-12);

// Least-squares slope of log(ys) against log(xs).
double fitted_order(std::span<const double> xs, std::span<const double> ys);

enum class LagrangianKind { relativistic, caldirola_kanai, free };

// How the proper time advances under a partial time derivative taken at fixed
// velocity. `state_velocity` lets tau' = sqrt(1 - v^2/c^2) follow the velocity
// argument of L; `trajectory_velocity` freezes it at the trajectory's velocity.
enum class TauRate { state_velocity, trajectory_velocity };

struct PdeResidual {
  double x_term = 0.0;      // v d3L/dx dv2
  double v_term = 0.0;      // F d3L/dv3
  double t_term = 0.0;      // d3L/dv dt dv
  double force_term = 0.0;  // dF/dv d2L/dv2
  double sum = 0.0;
  double scaled = 0.0;      // |sum| / largest term magnitude
};

// Finite-difference evaluation of the cross-partial condition on L at the
// anchor state (t, x, v, tau taken from a trajectory sample).
PdeResidual lagrangian_pde_residual(LagrangianKind kind, const ForceSpec& F, const SimParams& p,
                                    const PotentialField& U, const State& anchor,
                                    TauRate rate = TauRate::state_velocity);

struct IntegratingFactorCheck {
  std::vector<double> mu;
  std::vector<double> residual;  // |(1/sqrt(1-v^2/c^2)) dmu/dt - gamma mu| / mu
};

IntegratingFactorCheck integrating_factor_check(const Trajectory& traj);

// v / sqrt(1 - v^2/c^2), the antiderivative of (1 - v^2/c^2)^(-3/2) with g(0) = 0.
double g_of_v(double v, double c);

}  // namespace dissrel
