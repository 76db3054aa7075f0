#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dissrel/kernels.hpp"
#include "dissrel/ode.hpp"

namespace dissrel {

using cplx = std::complex<double>;

// Separated mode f(t) e^{sign i k x} of psi_tt = psi_xx - e^{2 gamma tau(t)} psi.
struct ModeSpec {
  double k = 1.0;
  double order = 0.86602540378443865;  // sqrt(3)/2
  int sign = +1;

  void validate() const;
};

// Source of the mass term e^{2 gamma tau(t)}. The exact provider carries the
// particle's (v, tau) as two auxiliary ODE components.
class TauProvider {
 public:
  enum class Kind { none, log_approx, exact_from_eom };

  // gamma = 0: mass term 1
  static TauProvider none() { return TauProvider(Kind::none, 0.0, 0.0); }
  // tau = -ln(t) / gamma, mass term 1 / t^2
  static TauProvider log_approx(double gamma);
  // tau from the free particle with v(0) = v0, tau(0) = 0, c = 1.
  static TauProvider exact_from_eom(double gamma, double v0);
  // Same, with v0 = sqrt(1 - xi0^2) where xi0 atanh(xi0) = 1.
  static TauProvider exact_from_eom(double gamma);

  Kind kind() const { return kind_; }
  double gamma() const { return gamma_; }
  double v0() const { return v0_; }
  std::string name() const;

  std::size_t aux_dim() const { return kind_ == Kind::exact_from_eom ? 2 : 0; }
  // Particle state (v, tau) at t0 for the exact provider.
  std::vector<double> initial_aux(double t0) const;
  void aux_rhs(double t, std::span<const double> aux, std::span<double> daux) const;
  double mass_term(double t, std::span<const double> aux) const;

 private:
  TauProvider(Kind kind, double gamma, double v0) : kind_(kind), gamma_(gamma), v0_(v0) {}
  Kind kind_;
  double gamma_;
  double v0_;
};

struct ModeSolution {
  enum class Provenance { analytic_bessel, numeric_ode, pde_extract };

  std::vector<double> t;
  std::vector<cplx> f;
  std::vector<cplx> fp;
  std::vector<double> mass;      // k^2 + e^{2 gamma tau} at each t
  std::vector<double> residual;  // |f'' + q f| / (q sqrt(|f|^2 + |f'|^2 / q))
  Provenance provenance = Provenance::analytic_bessel;
  OdeStats stats;

  std::size_t size() const { return t.size(); }
};

std::string provenance_name(ModeSolution::Provenance p);

// sqrt(t) (a J_{i nu}(k t) + b Y_{i nu}(k t)). Grid positive and increasing.
ModeSolution mode_analytic_basis(const ModeSpec& spec, const std::vector<double>& t_grid, cplx a,
                                 cplx b, Exec exec = Exec::parallel);
// The combination with a = b = 1.
ModeSolution mode_analytic(const ModeSpec& spec, const std::vector<double>& t_grid,
                           Exec exec = Exec::parallel);

// Coefficients (a, b) of the analytic basis matching f(t0) = f0, f'(t0) = fp0.
std::pair<cplx, cplx> fit_coefficients(const ModeSpec& spec, double t0, cplx f0, cplx fp0);

// f(t0), f'(t0) of the analytic combination (1, 1).
std::pair<cplx, cplx> analytic_initial_data(const ModeSpec& spec, double t0);

// Integrates f'' + (k^2 + e^{2 gamma tau}) f = 0 from t_grid[0] with
// f = f0, f' = fp0 and records f, f' at every grid time. tol in (0, 1e-6].
ModeSolution mode_solve_numeric(const ModeSpec& spec, const TauProvider& tau,
                                const std::vector<double>& t_grid, double tol, cplx f0, cplx fp0);

// Angular frequency from the spacing of zero crossings of Re f:
// pi (N - 1) / (t_last - t_first). Needs at least three crossings.
double measure_frequency(const ModeSolution& mode);

struct Field {
  std::vector<double> t;
  std::vector<double> x;
  std::vector<cplx> psi;  // row-major in t

  cplx at(std::size_t it, std::size_t ix) const { return psi[it * x.size() + ix]; }
};

enum class ModeSource { analytic, numeric };

// psi(t, x) = f(t) e^{sign i k x}. The numeric source integrates under the log
// provider from the analytic data at t_grid[0].
Field wavefunction(const ModeSpec& spec, const std::vector<double>& t_grid,
                   const std::vector<double>& x_grid, ModeSource source,
                   Exec exec = Exec::parallel);
Field assemble(const ModeSpec& spec, const ModeSolution& mode, const std::vector<double>& x_grid,
               Exec exec = Exec::parallel);

struct PdeOracleResult {
  Field field;
  ModeSolution extracted;  // projection onto e^{sign i k x}
  OdeStats stats;
};

// Method-of-lines solve on a periodic domain [0, length) with nx nodes,
// started from psi = f0 e^{sign i k x}, psi_t = fp0 e^{sign i k x}.
// k length / (2 pi) must be an integer and nx >= 64.
PdeOracleResult pde_oracle(const ModeSpec& spec, const TauProvider& tau,
                           const std::vector<double>& t_grid, double length, std::size_t nx,
                           double tol, cplx f0, cplx fp0, Exec exec = Exec::parallel);

// max_i |a_i - b_i| / max_i |b_i|
double relative_sup_error(std::span<const cplx> a, std::span<const cplx> b);

void write_mode_csv(std::ostream& os, const ModeSolution& mode);
void write_field_csv(std::ostream& os, const Field& field);

}  // namespace dissrel
