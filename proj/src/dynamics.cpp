#include "dissrel/dynamics.hpp"

#include <array>
#include <cmath>
#include <ostream>
#include <sstream>

#include "dissrel/csv.hpp"
#include "dissrel/errors.hpp"
#include "dissrel/ode.hpp"

namespace dissrel {

namespace {

// Trial states closer than this fraction to the light cone are rejected.
constexpr double kSpeedGuard = 1e-12;
// Absolute tolerance floor, relative to tol.
constexpr double kAtolScale = 1e-9;

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

}  // namespace

void SimParams::validate() const {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw DomainError("SimParams: gamma >= 0 violated");
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("SimParams: c > 0 violated");
}

std::string PotentialField::name() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::zero: return "zero";
    case Kind::linear: os << "linear(" << param_ << ")"; break;
    case Kind::harmonic: os << "harmonic(" << param_ << ")"; break;
  }
  return os.str();
}

double PotentialField::evaluate(double, double x) const {
  switch (kind_) {
    case Kind::zero: return 0.0;
    case Kind::linear: return param_ * x;
    case Kind::harmonic: return 0.5 * param_ * param_ * x * x;
  }
  return 0.0;
}

double PotentialField::gradient(double, double x) const {
  switch (kind_) {
    case Kind::zero: return 0.0;
    case Kind::linear: return param_;
    case Kind::harmonic: return param_ * param_ * x;
  }
  return 0.0;
}

double acceleration(const State& s, const SimParams& p, const PotentialField& U) {
  require_subluminal(s.v, p.c, "acceleration");
  const double w2 = one_minus_beta2(s.v, p.c);
  return (-U.gradient(s.t, s.x) - p.gamma * s.v) * w2 * std::sqrt(w2);
}

double lorentz_kinetic(const State& s, const SimParams& p) {
  require_subluminal(s.v, p.c, "lorentz_kinetic");
  return 1.0 / std::sqrt(one_minus_beta2(s.v, p.c));
}

double canonical_momentum(const State& s, const SimParams& p) {
  require_subluminal(s.v, p.c, "canonical_momentum");
  return s.v * std::exp(p.gamma * s.tau) / std::sqrt(one_minus_beta2(s.v, p.c));
}

Trajectory integrate_eom(const State& s0, const SimParams& p, const PotentialField& U,
                         double t_end, double tol, const SamplingOptions& sampling) {
  p.validate();
  require_subluminal(s0.v, p.c, "integrate_eom");
  if (!(t_end > s0.t)) throw std::invalid_argument("integrate_eom: t_end must exceed t0");
  if (!(tol > 0.0 && tol <= 1e-3)) throw std::invalid_argument("integrate_eom: tol must lie in (0, 1e-3]");

  const double c = p.c;
  const double gamma = p.gamma;
  OdeRhs rhs = [&U, c, gamma](double t, std::span<const double> y, std::span<double> dy) {
    const double w2 = one_minus_beta2(y[1], c);
    // Outside the light cone sqrt yields NaN and the step is rejected.
    const double w = std::sqrt(w2);
    dy[0] = y[1];
    dy[1] = (-U.gradient(t, y[0]) - gamma * y[1]) * w2 * w;
    dy[2] = w;
  };

  OdeOptions opt;
  opt.rtol = tol;
  opt.atol = tol * kAtolScale;
  opt.guard = [c](double, std::span<const double> y) {
    return !(std::abs(y[1]) < c * (1.0 - kSpeedGuard));
  };

  const auto outputs = linspace(s0.t, t_end, std::max<std::size_t>(sampling.uniform_samples, 2));
  const std::array<double, 3> y0{s0.x, s0.v, s0.tau};
  const auto sol = solve_sampled(rhs, y0, s0.t, t_end, outputs, opt, sampling.include_steps);

  Trajectory traj;
  traj.params = p;
  traj.samples.reserve(sol.size());
  for (std::size_t i = 0; i < sol.size(); ++i) {
    const auto r = sol.row(i);
    traj.samples.push_back(State{sol.t[i], r[0], r[1], r[2]});
  }
  traj.stats.steps = sol.stats.accepted;
  traj.stats.rejected = sol.stats.rejected;
  traj.stats.guard_rejections = sol.stats.guard_rejections;
  traj.stats.tol = tol;
  traj.stats.max_error_ratio = sol.stats.max_error_ratio;
  return traj;
}

std::vector<double> sample_times(const Trajectory& traj) {
  std::vector<double> t;
  t.reserve(traj.size());
  for (const auto& s : traj.samples) t.push_back(s.t);
  return t;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  csv::header(os, {"t", "x", "v", "tau", "p", "lorentz"});
  for (const auto& s : traj.samples) {
    csv::row(os, s.t, s.x, s.v, s.tau, canonical_momentum(s, traj.params),
             lorentz_kinetic(s, traj.params));
  }
}

}  // namespace dissrel
