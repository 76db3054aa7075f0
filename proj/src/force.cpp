#include "dissrel/force.hpp"

#include <cmath>
#include <sstream>

namespace dissrel {

ForceSpec ForceSpec::linear_drag(double gamma) {
  return ForceSpec(Kind::linear_drag, SimParams{gamma, 1.0}, PotentialField::zero(), 0.0);
}

ForceSpec ForceSpec::position_only(const PotentialField& U) {
  return ForceSpec(Kind::position_only, SimParams{}, U, 0.0);
}

ForceSpec ForceSpec::harmonic(double omega) {
  return ForceSpec(Kind::harmonic, SimParams{}, PotentialField::harmonic(omega), omega);
}

ForceSpec ForceSpec::relativistic_drag(const SimParams& p, const PotentialField& U) {
  return ForceSpec(Kind::relativistic_drag, p, U, 0.0);
}

std::string ForceSpec::name() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::linear_drag: os << "linear-drag(" << params_.gamma << ")"; break;
    case Kind::position_only: os << "position-only(" << U_.name() << ")"; break;
    case Kind::harmonic: os << "harmonic(" << omega_ << ")"; break;
    case Kind::relativistic_drag:
      os << "relativistic-drag(" << params_.gamma << "," << params_.c << "," << U_.name() << ")";
      break;
  }
  return os.str();
}

double ForceSpec::evaluate(double t, double x, double v) const {
  switch (kind_) {
    case Kind::linear_drag: return -params_.gamma * v;
    case Kind::position_only:
    case Kind::harmonic: return -U_.gradient(t, x);
    case Kind::relativistic_drag: {
      const double b = v / params_.c;
      const double w2 = (1.0 - b) * (1.0 + b);
      return (-U_.gradient(t, x) - params_.gamma * v) * w2 * std::sqrt(w2);
    }
  }
  return 0.0;
}

double ForceSpec::dfdv(double t, double x, double v) const {
  switch (kind_) {
    case Kind::linear_drag: return -params_.gamma;
    case Kind::position_only:
    case Kind::harmonic: return 0.0;
    case Kind::relativistic_drag: {
      const double c = params_.c;
      const double b = v / c;
      const double w2 = (1.0 - b) * (1.0 + b);
      const double w = std::sqrt(w2);
      const double drive = -U_.gradient(t, x) - params_.gamma * v;
      return -params_.gamma * w2 * w - 3.0 * drive * w * v / (c * c);
    }
  }
  return 0.0;
}

bool ForceSpec::velocity_independent() const {
  return kind_ == Kind::position_only || kind_ == Kind::harmonic;
}

}  // namespace dissrel
