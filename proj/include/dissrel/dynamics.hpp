#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace dissrel {

// Dissipation rate gamma (1/time) and speed of light c.
struct SimParams {
  double gamma = 0.0;
  double c = 1.0;

  void validate() const;
};

// One point of a particle history. `tau` is proper time accumulated since t0.
struct State {
  double t = 0.0;
  double x = 0.0;
  double v = 0.0;
  double tau = 0.0;
};

// Closed family of time-independent potentials U(x).
class PotentialField {
 public:
  enum class Kind { zero, linear, harmonic };

  static PotentialField zero() { return PotentialField(Kind::zero, 0.0); }
  // U = a x
  static PotentialField linear(double a) { return PotentialField(Kind::linear, a); }
  // U = omega^2 x^2 / 2
  static PotentialField harmonic(double omega) { return PotentialField(Kind::harmonic, omega); }

  Kind kind() const { return kind_; }
  double parameter() const { return param_; }
  std::string name() const;

  double evaluate(double t, double x) const;
  double gradient(double t, double x) const;

 private:
  PotentialField(Kind kind, double param) : kind_(kind), param_(param) {}
  Kind kind_;
  double param_;
};

struct TrajectoryStats {
  std::size_t steps = 0;
  std::size_t rejected = 0;
  std::size_t guard_rejections = 0;
  double tol = 0.0;
  double max_error_ratio = 0.0;  // achieved local error as a fraction of tol
};

// Immutable particle history; samples strictly increasing in t.
struct Trajectory {
  SimParams params;
  std::vector<State> samples;
  TrajectoryStats stats;

  const State& front() const { return samples.front(); }
  const State& back() const { return samples.back(); }
  std::size_t size() const { return samples.size(); }
};

// Output grid for integrations: `uniform_samples` evenly spaced times over
// [t0, t_end], merged with every accepted step when `include_steps` is set.
struct SamplingOptions {
  std::size_t uniform_samples = 256;
  bool include_steps = true;
};

// (-dU/dx - gamma v)(1 - v^2/c^2)^(3/2). Throws DomainError if |v| >= c.
double acceleration(const State& s, const SimParams& p, const PotentialField& U);

// Coupled integration of dx/dt = v, dv/dt = acceleration, dtau/dt = sqrt(1 - v^2/c^2)
// from s0 to t_end with relative tolerance tol in (0, 1e-3].
Trajectory integrate_eom(const State& s0, const SimParams& p, const PotentialField& U,
                         double t_end, double tol, const SamplingOptions& sampling = {});

// 1 / sqrt(1 - v^2/c^2)
double lorentz_kinetic(const State& s, const SimParams& p);

// v e^(gamma tau) / sqrt(1 - v^2/c^2), conserved when dU/dx = 0.
double canonical_momentum(const State& s, const SimParams& p);

// Sample times of a trajectory.
std::vector<double> sample_times(const Trajectory& traj);

// Header `t,x,v,tau,p,lorentz`, 17 significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace dissrel
