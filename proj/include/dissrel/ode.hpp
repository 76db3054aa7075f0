#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace dissrel {

using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

// Returns true when a trial state must be rejected (the step is then halved).
using StepGuard = std::function<bool(double t, std::span<const double> y)>;

struct OdeOptions {
  double rtol = 1e-8;
  double atol = 1e-14;
  double h_init = 0.0;           // 0 selects the starting step automatically
  double h_min_rel = 1e-13;      // minimum step, relative to the span length
  double h_max = 0.0;            // 0 means unbounded
  std::size_t max_steps = 2'000'000;
  StepGuard guard;
};

struct OdeStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t guard_rejections = 0;
  std::size_t rhs_evals = 0;
  double max_error_ratio = 0.0;  // largest scaled error norm among accepted steps
};

// One accepted step with its continuous extension.
class StepView {
 public:
  double t_old() const { return t_old_; }
  double t_new() const { return t_old_ + h_; }
  std::span<const double> y_new() const { return y_new_; }
  // Fourth-order dense output for t in [t_old, t_new].
  void interpolate(double t, std::span<double> out) const;

 private:
  friend class DormandPrince;
  double t_old_ = 0.0;
  double h_ = 0.0;
  std::span<const double> y_new_;
  std::span<const double> r1_, r2_, r3_, r4_, r5_;
};

// Embedded Runge-Kutta 5(4) pair of Dormand and Prince with PI step control
// and free dense output.
class DormandPrince {
 public:
  DormandPrince(OdeRhs rhs, std::size_t dim, OdeOptions options = {});

  // Advances y from t0 to exactly t1 (t1 > t0). `on_step` sees every accepted step.
  OdeStats integrate(double t0, std::span<double> y, double t1,
                     const std::function<void(const StepView&)>& on_step = {});

  std::size_t dim() const { return dim_; }
  const OdeOptions& options() const { return opt_; }

 private:
  double initial_step(double t0, std::span<const double> y, std::span<const double> f0,
                      double span) const;
  double error_norm(std::span<const double> y, std::span<const double> y_new,
                    std::span<const double> err) const;

  OdeRhs rhs_;
  std::size_t dim_;
  OdeOptions opt_;
};

// Solution sampled at requested output times, optionally merged with every
// accepted step. Row i of `y` holds the state at t[i].
struct SampledSolution {
  std::vector<double> t;
  std::vector<double> y;  // row-major, dim columns
  std::size_t dim = 0;
  OdeStats stats;

  std::size_t size() const { return t.size(); }
  std::span<const double> row(std::size_t i) const { return {y.data() + i * dim, dim}; }
};

// Integrates from t0 to t1 and records the state at each of `outputs`
// (sorted, inside [t0, t1]). t0 and t1 are always included.
SampledSolution solve_sampled(const OdeRhs& rhs, std::span<const double> y0, double t0, double t1,
                              std::span<const double> outputs, const OdeOptions& options,
                              bool include_steps);

std::vector<double> linspace(double a, double b, std::size_t n);

}  // namespace dissrel
