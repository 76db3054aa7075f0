#include "dissrel/variational.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "dissrel/errors.hpp"
#include "dissrel/finite_diff.hpp"
#include "dissrel/ode.hpp"

namespace dissrel {

namespace {

constexpr double kAtolScale = 1e-9;
constexpr double kSpeedGuard = 1e-12;

double one_minus_beta2(double v, double c) {
  const double b = v / c;
  return (1.0 - b) * (1.0 + b);
}

void require_subluminal(double v, double c, const char* where) {
  if (!(std::abs(v) < c)) {
    std::ostringstream msg;
    msg << where << ": |v| < c violated (v=" << v << ", c=" << c << ")";
    throw DomainError(msg.str());
  }
}

// Fourth-order central stencil on offsets -r..r for the m-th derivative.
struct Stencil {
  std::vector<double> offsets;
  std::vector<double> weights;  // already divided by h^m
};

Stencil central_stencil(int m, double h) {
  const int r = m <= 2 ? 2 : 3;
  Stencil s;
  for (int i = -r; i <= r; ++i) s.offsets.push_back(i * h);
  s.weights = fd_weights(0.0, s.offsets, m);
  return s;
}

double apply(const Stencil& s, const std::function<double(double)>& f, double x0) {
  double acc = 0.0;
  for (std::size_t i = 0; i < s.offsets.size(); ++i) {
    if (s.weights[i] != 0.0) acc += s.weights[i] * f(x0 + s.offsets[i]);
  }
  return acc;
}

// Step for the nested third-derivative stencils: balances O(h^4) truncation
// against eps / h^3 rounding.
double nested_step(double scale) {
  return std::pow(std::numeric_limits<double>::epsilon(), 1.0 / 7.0) * scale;
}

}  // namespace

double lagrangian_value(double t, double x, double v, double tau, const SimParams& p,
                        const PotentialField& U) {
  require_subluminal(v, p.c, "lagrangian_value");
  const double mu = std::exp(p.gamma * tau);
  return -p.c * p.c * mu * std::sqrt(one_minus_beta2(v, p.c)) - mu * U.evaluate(t, x);
}

double hamiltonian_value(const CanonicalState& cs, const SimParams& p, const PotentialField& U) {
  if (!(cs.tau >= 0.0)) throw DomainError("hamiltonian_value: tau >= 0 violated");
  const double mu = std::exp(p.gamma * cs.tau);
  const double q = cs.p / mu;
  return p.c * p.c * mu * std::sqrt(1.0 + q * q / (p.c * p.c)) + mu * U.evaluate(cs.t, cs.x);
}

double legendre_residual(double t, double x, double v, double tau, const SimParams& p,
                         const PotentialField& U) {
  const State s{t, x, v, tau};
  const double pc = canonical_momentum(s, p);
  const double L = lagrangian_value(t, x, v, tau, p, U);
  const double H = hamiltonian_value(CanonicalState{t, x, pc, tau}, p, U);
  return pc * v - L - H;
}

double momentum_from_lagrangian(double t, double x, double v, double tau, const SimParams& p,
                                const PotentialField& U) {
  const double h = fd_step(p.c);
  if (!(std::abs(v) + h < p.c)) {
    throw DomainError("momentum_from_lagrangian: stencil leaves |v| < c");
  }
  return central_diff([&](double vv) { return lagrangian_value(t, x, vv, tau, p, U); }, v, h);
}

std::vector<double> euler_lagrange_residual(const Trajectory& traj, const PotentialField& U) {
  const std::size_t n = traj.size();
  if (n < 5) throw GridError("euler_lagrange_residual: need at least 5 samples");
  const auto t = sample_times(traj);
  if (!is_uniform(t)) throw GridError("euler_lagrange_residual: samples are not uniformly spaced");

  const SimParams& p = traj.params;
  std::vector<double> mom(n);
  for (std::size_t i = 0; i < n; ++i) mom[i] = canonical_momentum(traj.samples[i], p);
  const auto dp = fd_derivative(t, mom, 1, 5);

  std::vector<double> out;
  out.reserve(n - 2);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const State& s = traj.samples[i];
    const double r = dp[i] + std::exp(p.gamma * s.tau) * U.gradient(s.t, s.x);
    out.push_back(std::abs(r) / (1.0 + std::abs(mom[i])));
  }
  return out;
}

double velocity_from_momentum(double p_can, double tau, const SimParams& p) {
  const double q = p_can * std::exp(-p.gamma * tau);
  return q / std::sqrt(1.0 + q * q / (p.c * p.c));
}

Trajectory hamilton_flow(const CanonicalState& cs0, const SimParams& p, const PotentialField& U,
                         double t_end, double tol, const SamplingOptions& sampling) {
  p.validate();
  if (!(t_end > cs0.t)) throw std::invalid_argument("hamilton_flow: t_end must exceed t0");
  if (!(tol > 0.0 && tol <= 1e-3)) throw std::invalid_argument("hamilton_flow: tol must lie in (0, 1e-3]");
  if (!(cs0.tau >= 0.0)) throw DomainError("hamilton_flow: tau >= 0 violated");

  const double c = p.c;
  const double gamma = p.gamma;
  // y = (x, p, tau)
  OdeRhs rhs = [&U, c, gamma](double t, std::span<const double> y, std::span<double> dy) {
    const double mu = std::exp(gamma * y[2]);
    const double q = y[1] / mu;
    const double root = std::sqrt(1.0 + q * q / (c * c));
    dy[0] = q / root;
    dy[1] = -mu * U.gradient(t, y[0]);
    dy[2] = 1.0 / root;
  };

  OdeOptions opt;
  opt.rtol = tol;
  opt.atol = tol * kAtolScale;
  opt.guard = [c, gamma](double, std::span<const double> y) {
    const double q = y[1] * std::exp(-gamma * y[2]);
    const double v = q / std::sqrt(1.0 + q * q / (c * c));
    return !(std::abs(v) < c * (1.0 - kSpeedGuard));
  };

  const auto outputs = linspace(cs0.t, t_end, std::max<std::size_t>(sampling.uniform_samples, 2));
  const std::array<double, 3> y0{cs0.x, cs0.p, cs0.tau};
  const auto sol = solve_sampled(rhs, y0, cs0.t, t_end, outputs, opt, sampling.include_steps);

  Trajectory traj;
  traj.params = p;
  traj.samples.reserve(sol.size());
  for (std::size_t i = 0; i < sol.size(); ++i) {
    const auto r = sol.row(i);
    traj.samples.push_back(State{sol.t[i], r[0], velocity_from_momentum(r[1], r[2], p), r[2]});
  }
  traj.stats.steps = sol.stats.accepted;
  traj.stats.rejected = sol.stats.rejected;
  traj.stats.guard_rejections = sol.stats.guard_rejections;
  traj.stats.tol = tol;
  traj.stats.max_error_ratio = sol.stats.max_error_ratio;
  return traj;
}

double ck_hamiltonian(double t, double x, double p_can, const SimParams& params,
                      const PotentialField& U) {
  const double e = std::exp(params.gamma * t);
  return 0.5 * p_can * p_can / e + e * U.evaluate(t, x) + params.c * params.c * e;
}

double ck_relative_gap(double v0, double gamma, double t_eval, double tol) {
  const SimParams p{gamma, 1.0};
  const auto U = PotentialField::zero();
  State s{0.0, 0.0, v0, 0.0};
  if (t_eval > 0.0) {
    s = integrate_eom(s, p, U, t_eval, tol, SamplingOptions{2, false}).back();
  }
  const double pc = canonical_momentum(s, p);
  const double h_rel = hamiltonian_value(CanonicalState{s.t, s.x, pc, s.tau}, p, U);
  const double h_ck = ck_hamiltonian(s.t, s.x, pc, p, U);
  return std::abs(h_rel - h_ck) / std::abs(h_rel);
}

double fitted_order(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw std::invalid_argument("fitted_order: need at least two matching points");
  }
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

PdeResidual lagrangian_pde_residual(LagrangianKind kind, const ForceSpec& F, const SimParams& p,
                                    const PotentialField& U, const State& anchor, TauRate rate) {
  const double c = p.c;
  const double gamma = p.gamma;
  const double t0 = anchor.t;
  const double x0 = anchor.x;
  const double v0 = anchor.v;

  // L(t, x, v) with the proper-time clock running at the rate set by v_clock.
  auto L = [&](double t, double x, double v, double v_clock) -> double {
    switch (kind) {
      case LagrangianKind::relativistic: {
        const double rate_v = rate == TauRate::state_velocity ? v_clock : v0;
        const double tau = anchor.tau + (t - t0) * std::sqrt(one_minus_beta2(rate_v, c));
        const double mu = std::exp(gamma * tau);
        return -c * c * mu * std::sqrt(one_minus_beta2(v, c)) - mu * U.evaluate(t, x);
      }
      case LagrangianKind::caldirola_kanai: {
        const double e = std::exp(gamma * t);
        return e * (0.5 * v * v - U.evaluate(t, x));
      }
      case LagrangianKind::free: return 0.5 * v * v - U.evaluate(t, x);
    }
    return 0.0;
  };

  const double hv = nested_step(c);
  const double hx = nested_step(std::max(1.0, std::abs(x0)));
  const double ht = nested_step(1.0 / std::max(1.0, gamma));
  if (kind == LagrangianKind::relativistic && !(std::abs(v0) + 6.0 * hv < c)) {
    throw DomainError("lagrangian_pde_residual: stencil leaves |v| < c");
  }

  const Stencil d1v = central_stencil(1, hv), d2v = central_stencil(2, hv), d3v = central_stencil(3, hv);
  const Stencil d1x = central_stencil(1, hx), d1t = central_stencil(1, ht);

  // Second v-derivative at (t, x, v) with the clock tied to the same v.
  auto Lvv = [&](double t, double x, double v) {
    return apply(d2v, [&](double vv) { return L(t, x, vv, v); }, v);
  };

  PdeResidual r;
  const double lvv = Lvv(t0, x0, v0);
  const double lvvv = apply(d3v, [&](double vv) { return L(t0, x0, vv, v0); }, v0);
  const double lxvv = apply(d1x, [&](double xx) { return Lvv(t0, xx, v0); }, x0);
  // d/dv [ d/dt [ dL/dv ] ]: the time derivative is taken at fixed velocity w.
  const double lvtv = apply(
      d1v,
      [&](double w) {
        return apply(
            d1t,
            [&](double tt) { return apply(d1v, [&](double vv) { return L(tt, x0, vv, w); }, w); },
            t0);
      },
      v0);

  const double f = F.evaluate(t0, x0, v0);
  const double fv = F.dfdv(t0, x0, v0);
  r.x_term = v0 * lxvv;
  r.v_term = f * lvvv;
  r.t_term = lvtv;
  r.force_term = fv * lvv;
  r.sum = r.x_term + r.v_term + r.t_term + r.force_term;
  const double scale = std::max({std::abs(r.x_term), std::abs(r.v_term), std::abs(r.t_term),
                                 std::abs(r.force_term)});
  r.scaled = scale > 0.0 ? std::abs(r.sum) / scale : 0.0;
  return r;
}

IntegratingFactorCheck integrating_factor_check(const Trajectory& traj) {
  const std::size_t n = traj.size();
  if (n == 0) throw std::invalid_argument("integrating_factor_check: empty trajectory");
  const SimParams& p = traj.params;

  IntegratingFactorCheck out;
  out.mu.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.mu[i] = std::exp(p.gamma * traj.samples[i].tau);
  out.residual.assign(n, 0.0);
  if (n == 1) return out;

  const auto t = sample_times(traj);
  const auto dmu = fd_derivative(t, out.mu, 1, std::min<std::size_t>(5, n));
  for (std::size_t i = 0; i < n; ++i) {
    const double lorentz = lorentz_kinetic(traj.samples[i], p);
    out.residual[i] = std::abs(lorentz * dmu[i] - p.gamma * out.mu[i]) / out.mu[i];
  }
  return out;
}

double g_of_v(double v, double c) {
  require_subluminal(v, c, "g_of_v");
  return v / std::sqrt(one_minus_beta2(v, c));
}

}  // namespace dissrel
