#pragma once

#include <string>

#include "dissrel/dynamics.hpp"

namespace dissrel {

// Force per unit mass F(t, x, v) from a closed, time-independent family.
class ForceSpec {
 public:
  enum class Kind { linear_drag, position_only, harmonic, relativistic_drag };

  // F = -gamma v
  static ForceSpec linear_drag(double gamma);
  // F = -dU/dx
  static ForceSpec position_only(const PotentialField& U);
  // F = -omega^2 x
  static ForceSpec harmonic(double omega);
  // F = (-dU/dx - gamma v)(1 - v^2/c^2)^(3/2)
  static ForceSpec relativistic_drag(const SimParams& p, const PotentialField& U);

  Kind kind() const { return kind_; }
  std::string name() const;

  double evaluate(double t, double x, double v) const;
  double dfdv(double t, double x, double v) const;

  // dF/dv vanishes identically.
  bool velocity_independent() const;

 private:
  ForceSpec(Kind kind, SimParams params, PotentialField U, double omega)
      : kind_(kind), params_(params), U_(U), omega_(omega) {}

  Kind kind_;
  SimParams params_;
  PotentialField U_;
  double omega_;
};

}  // namespace dissrel
