#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dissrel/force.hpp"
#include "dissrel/kernels.hpp"

namespace dissrel {

// G = d2L/dv2 sampled on a tensor grid, row-major in x.
struct GField {
  enum class Provenance { characteristic_solve, analytic };

  std::vector<double> xs;
  std::vector<double> vs;
  std::vector<double> values;
  Provenance provenance = Provenance::analytic;

  double at(std::size_t ix, std::size_t iv) const { return values[ix * vs.size() + iv]; }

  static GField analytic(std::vector<double> xs, std::vector<double> vs,
                         const std::function<double(double, double)>& g);
};

// Named choice of the x-only gauge term f2 in L = Phi(x, v) + f1(x) v - f2(x).
class Gauge {
 public:
  enum class Kind { zero, linear, quadratic, force_matched };

  static Gauge zero() { return Gauge(Kind::zero, 0.0); }
  // f2 = a x
  static Gauge linear(double a) { return Gauge(Kind::linear, a); }
  // f2 = a x^2 / 2
  static Gauge quadratic(double a) { return Gauge(Kind::quadratic, a); }
  // f2 solved from the force so the Euler-Lagrange equation reproduces it:
  // f2'(x) = -G(x, v_a) F(x, v_a) at the base velocity v_a.
  static Gauge force_matched(const ForceSpec& F);

  Kind kind() const { return kind_; }
  double coefficient() const { return a_; }
  const ForceSpec* force() const { return force_.has_value() ? &*force_ : nullptr; }
  std::string name() const;

 private:
  Gauge(Kind kind, double a) : kind_(kind), a_(a) {}
  Kind kind_;
  double a_;
  std::optional<ForceSpec> force_;
};

struct LagrangianTable {
  std::vector<double> xs;
  std::vector<double> vs;
  std::vector<double> values;
  std::string f1_name = "0";
  std::string f2_name = "0";

  double at(std::size_t ix, std::size_t iv) const { return values[ix * vs.size() + iv]; }
};

// Solves v dG/dx + F dG/dv + (dF/dv) G = 0 along characteristics, seeded with
// G = 1 on the line x = min(xs). Every grid node is traced back to the seed
// line independently.
GField inverse_G(const ForceSpec& F, const std::vector<double>& xs, const std::vector<double>& vs,
                 Exec exec = Exec::parallel);

// Double quadrature of G in v from the first velocity node (uniform grid,
// fourth-order cumulative rule), minus f2(x). f1 is zero.
LagrangianTable lagrangian_from_G(const GField& G, const Gauge& f2);

// Adds the gauge term f1(x) v.
LagrangianTable add_linear_gauge(const LagrangianTable& table,
                                 const std::function<double(double)>& f1, const std::string& name);

// Largest scaled transport residual |v G_x + F G_v + F_v G| / max|term| over
// interior nodes.
double gfield_pde_residual(const GField& G, const ForceSpec& F);

// Force implied by the table's Euler-Lagrange equation, (L_x - v L_xv) / L_vv,
// at node (ix, iv).
std::vector<double> el_force(const LagrangianTable& table);

// Largest |F_EL - F| / (1 + |F|) over interior nodes.
double el_reproduction_residual(const LagrangianTable& table, const ForceSpec& F);

// Largest |L_vv - G| / |G| over interior nodes.
double quadrature_consistency(const LagrangianTable& table, const GField& G);

void write_gfield_csv(std::ostream& os, const GField& G);
void write_lagrangian_csv(std::ostream& os, const LagrangianTable& table);

}  // namespace dissrel
