#include "dissrel/modes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "dissrel/approx_chain.hpp"
#include "dissrel/csv.hpp"
#include "dissrel/errors.hpp"
#include "dissrel/finite_diff.hpp"
#include "dissrel/special.hpp"

namespace dissrel {

namespace {

void check_grid(const std::vector<double>& t, bool positive, const char* who) {
  if (t.empty()) throw GridError(std::string(who) + ": empty grid");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(t[i]) || (positive && !(t[i] > 0.0)) || t[i] < 0.0 ||
        (i > 0 && !(t[i] > t[i - 1]))) {
      throw GridError(std::string(who) + ": grid must be increasing" + (positive ? " and positive" : ""));
    }
  }
}

double scaled_residual(cplx f, cplx fp, cplx fpp, double q) {
  const double amp = std::sqrt(std::norm(f) + std::norm(fp) / q);
  if (amp == 0.0) return 0.0;
  return std::abs(fpp + q * f) / (q * amp);
}

// f'' from the sampled f' (seven-point stencils), then the scaled residual.
void fill_grid_residual(ModeSolution& m) {
  const std::size_t n = m.size();
  if (n < 5) throw GridError("mode residual: at least 5 grid points required");
  std::vector<double> re(n), im(n);
  for (std::size_t i = 0; i < n; ++i) {
    re[i] = m.fp[i].real();
    im[i] = m.fp[i].imag();
  }
  const std::size_t w = std::min<std::size_t>(7, n);
  const auto dre = fd_derivative(m.t, re, 1, w);
  const auto dim = fd_derivative(m.t, im, 1, w);
  m.residual.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    m.residual[i] = scaled_residual(m.f[i], m.fp[i], cplx(dre[i], dim[i]), m.mass[i]);
  }
}

struct ModePoint {
  cplx f;
  cplx fp;
};

ModePoint analytic_point(const ModeSpec& s, double t, cplx a, cplx b) {
  const auto bes = bessel_imaginary_order(s.order, s.k * t);
  const cplx c = a * bes.j_plus.value + b * bes.y.value;
  const cplx dc = a * bes.j_plus.derivative + b * bes.y.derivative;
  const double r = std::sqrt(t);
  return {r * c, c / (2.0 * r) + r * s.k * dc};
}

double free_particle_xi0() { return xi_exact(0.0, 1.0); }

}  // namespace

void ModeSpec::validate() const {
  if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("ModeSpec: k > 0 violated");
  if (!(order > 0.0) || !std::isfinite(order)) throw DomainError("ModeSpec: order > 0 violated");
  if (sign != 1 && sign != -1) throw DomainError("ModeSpec: sign must be +1 or -1");
}

TauProvider TauProvider::log_approx(double gamma) {
  if (!(gamma > 0.0)) throw DomainError("TauProvider::log_approx: gamma > 0 violated");
  return TauProvider(Kind::log_approx, gamma, 0.0);
}

TauProvider TauProvider::exact_from_eom(double gamma, double v0) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw DomainError("TauProvider::exact_from_eom: gamma >= 0 violated");
  if (!(std::abs(v0) < 1.0)) throw DomainError("TauProvider::exact_from_eom: |v0| < c violated");
  return TauProvider(Kind::exact_from_eom, gamma, v0);
}

TauProvider TauProvider::exact_from_eom(double gamma) {
  const double xi0 = free_particle_xi0();
  return exact_from_eom(gamma, std::sqrt((1.0 - xi0) * (1.0 + xi0)));
}

std::string TauProvider::name() const {
  switch (kind_) {
    case Kind::none: return "none";
    case Kind::log_approx: return "log";
    case Kind::exact_from_eom: return "exact";
  }
  return "?";
}

std::vector<double> TauProvider::initial_aux(double t0) const {
  if (kind_ != Kind::exact_from_eom) return {};
  std::vector<double> aux = {v0_, 0.0};
  if (t0 > 0.0) {
    OdeOptions opt;
    opt.rtol = 1e-13;
    opt.atol = 1e-16;
    DormandPrince dp(
        [this](double t, std::span<const double> y, std::span<double> dy) { aux_rhs(t, y, dy); }, 2,
        opt);
    dp.integrate(0.0, aux, t0);
  }
  return aux;
}

void TauProvider::aux_rhs(double, std::span<const double> aux, std::span<double> daux) const {
  const double v = aux[0];
  const double w = std::sqrt((1.0 - v) * (1.0 + v));
  daux[0] = -gamma_ * v * w * w * w;
  daux[1] = w;
}

double TauProvider::mass_term(double t, std::span<const double> aux) const {
  switch (kind_) {
    case Kind::none: return 1.0;
    case Kind::log_approx: return 1.0 / (t * t);
    case Kind::exact_from_eom: return std::exp(2.0 * gamma_ * aux[1]);
  }
  return 1.0;
}

std::string provenance_name(ModeSolution::Provenance p) {
  switch (p) {
    case ModeSolution::Provenance::analytic_bessel: return "analytic-bessel";
    case ModeSolution::Provenance::numeric_ode: return "numeric-ode";
    case ModeSolution::Provenance::pde_extract: return "pde-extract";
  }
  return "?";
}

ModeSolution mode_analytic_basis(const ModeSpec& spec, const std::vector<double>& t_grid, cplx a,
                                 cplx b, Exec exec) {
  spec.validate();
  check_grid(t_grid, true, "mode_analytic");
  const std::size_t n = t_grid.size();
  ModeSolution m;
  m.provenance = ModeSolution::Provenance::analytic_bessel;
  m.t = t_grid;
  m.f.resize(n);
  m.fp.resize(n);
  m.mass.resize(n);
  m.residual.resize(n);
  const double k2 = spec.k * spec.k;
  kernels::for_each_index(exec, n, [&](std::size_t i) {
    const double t = t_grid[i];
    const auto c = analytic_point(spec, t, a, b);
    m.f[i] = c.f;
    m.fp[i] = c.fp;
    m.mass[i] = k2 + 1.0 / (t * t);
    // f'' by the five-point stencil on extra evaluations around t.
    const double h = 2e-3 * std::min(t, 1.0 / spec.k);
    std::array<cplx, 4> side;
    const std::array<double, 4> off = {-2.0, -1.0, 1.0, 2.0};
    for (std::size_t j = 0; j < 4; ++j) side[j] = analytic_point(spec, t + off[j] * h, a, b).f;
    const cplx fpp = (-side[0] + 16.0 * side[1] - 30.0 * c.f + 16.0 * side[2] - side[3]) / (12.0 * h * h);
    m.residual[i] = scaled_residual(c.f, c.fp, fpp, m.mass[i]);
  });
  return m;
}

ModeSolution mode_analytic(const ModeSpec& spec, const std::vector<double>& t_grid, Exec exec) {
  return mode_analytic_basis(spec, t_grid, 1.0, 1.0, exec);
}

std::pair<cplx, cplx> fit_coefficients(const ModeSpec& spec, double t0, cplx f0, cplx fp0) {
  spec.validate();
  if (!(t0 > 0.0)) throw DomainError("fit_coefficients: t0 > 0 violated");
  const auto j = analytic_point(spec, t0, 1.0, 0.0);
  const auto y = analytic_point(spec, t0, 0.0, 1.0);
  const cplx det = j.f * y.fp - y.f * j.fp;
  if (std::abs(det) == 0.0) throw DegeneracyError("fit_coefficients: singular basis");
  return {(f0 * y.fp - y.f * fp0) / det, (j.f * fp0 - f0 * j.fp) / det};
}

std::pair<cplx, cplx> analytic_initial_data(const ModeSpec& spec, double t0) {
  spec.validate();
  if (!(t0 > 0.0)) throw DomainError("analytic_initial_data: t0 > 0 violated");
  const auto p = analytic_point(spec, t0, 1.0, 1.0);
  return {p.f, p.fp};
}

ModeSolution mode_solve_numeric(const ModeSpec& spec, const TauProvider& tau,
                                const std::vector<double>& t_grid, double tol, cplx f0, cplx fp0) {
  spec.validate();
  if (!(tol > 0.0 && tol <= 1e-6)) throw DomainError("mode_solve_numeric: tol in (0, 1e-6] violated");
  check_grid(t_grid, tau.kind() == TauProvider::Kind::log_approx, "mode_solve_numeric");
  if (t_grid.size() < 2) throw GridError("mode_solve_numeric: at least two grid times required");
  if (!std::isfinite(std::abs(f0)) || !std::isfinite(std::abs(fp0))) {
    throw DomainError("mode_solve_numeric: initial data must be finite");
  }

  const double k2 = spec.k * spec.k;
  const double t0 = t_grid.front();
  const auto aux0 = tau.initial_aux(t0);
  std::vector<double> y0 = {f0.real(), f0.imag(), fp0.real(), fp0.imag()};
  y0.insert(y0.end(), aux0.begin(), aux0.end());

  auto rhs = [&](double t, std::span<const double> y, std::span<double> dy) {
    const auto aux = y.subspan(4);
    const double q = k2 + tau.mass_term(t, aux);
    dy[0] = y[2];
    dy[1] = y[3];
    dy[2] = -q * y[0];
    dy[3] = -q * y[1];
    if (!aux.empty()) tau.aux_rhs(t, aux, dy.subspan(4));
  };

  const double q0 = k2 + tau.mass_term(t0, aux0);
  OdeOptions opt;
  opt.rtol = tol;
  opt.atol = 1e-2 * tol * (std::abs(f0) + std::abs(fp0) / std::sqrt(q0));
  const auto sol = solve_sampled(rhs, y0, t0, t_grid.back(), t_grid, opt, false);
  if (sol.size() != t_grid.size()) throw GridError("mode_solve_numeric: output grid not reproduced");

  ModeSolution m;
  m.provenance = ModeSolution::Provenance::numeric_ode;
  m.t = t_grid;
  m.stats = sol.stats;
  const std::size_t n = t_grid.size();
  m.f.resize(n);
  m.fp.resize(n);
  m.mass.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = sol.row(i);
    m.f[i] = {r[0], r[1]};
    m.fp[i] = {r[2], r[3]};
    m.mass[i] = k2 + tau.mass_term(t_grid[i], r.subspan(4));
  }
  if (n >= 5) {
    fill_grid_residual(m);
  } else {
    m.residual.assign(n, 0.0);
  }
  return m;
}

double measure_frequency(const ModeSolution& m) {
  std::vector<double> zeros;
  for (std::size_t i = 0; i + 1 < m.size(); ++i) {
    const double a = m.f[i].real(), b = m.f[i + 1].real();
    if (a == 0.0) {
      if (zeros.empty() || zeros.back() != m.t[i]) zeros.push_back(m.t[i]);
      continue;
    }
    if (!((a < 0.0) != (b < 0.0)) || b == 0.0) continue;
    // Cubic Hermite interpolant on [t_i, t_{i+1}] from f and f'.
    const double t0 = m.t[i], h = m.t[i + 1] - t0;
    const double da = m.fp[i].real() * h, db = m.fp[i + 1].real() * h;
    auto p = [&](double s) {
      const double s2 = s * s, s3 = s2 * s;
      return (2 * s3 - 3 * s2 + 1) * a + (s3 - 2 * s2 + s) * da + (-2 * s3 + 3 * s2) * b + (s3 - s2) * db;
    };
    double lo = 0.0, hi = 1.0;
    const bool neg_lo = a < 0.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      if ((p(mid) < 0.0) == neg_lo) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    zeros.push_back(t0 + 0.5 * (lo + hi) * h);
  }
  if (m.size() > 0 && m.f.back().real() == 0.0) zeros.push_back(m.t.back());
  if (zeros.size() < 3) throw NoRootError("measure_frequency: fewer than three zero crossings");
  return std::numbers::pi * static_cast<double>(zeros.size() - 1) / (zeros.back() - zeros.front());
}

Field assemble(const ModeSpec& spec, const ModeSolution& mode, const std::vector<double>& x_grid,
               Exec exec) {
  spec.validate();
  if (x_grid.empty()) throw GridError("wavefunction: empty x grid");
  Field fld;
  fld.t = mode.t;
  fld.x = x_grid;
  fld.psi.resize(mode.size() * x_grid.size());
  if (exec == Exec::serial) {
    kernels::assemble_field_serial(mode.f, x_grid, spec.k, spec.sign, fld.psi);
  } else {
    kernels::assemble_field_parallel(mode.f, x_grid, spec.k, spec.sign, fld.psi);
  }
  return fld;
}

Field wavefunction(const ModeSpec& spec, const std::vector<double>& t_grid,
                   const std::vector<double>& x_grid, ModeSource source, Exec exec) {
  check_grid(t_grid, true, "wavefunction");
  if (source == ModeSource::analytic) return assemble(spec, mode_analytic(spec, t_grid, exec), x_grid, exec);
  const auto [f0, fp0] = analytic_initial_data(spec, t_grid.front());
  // The 1/t^2 mass term of the log provider does not depend on gamma.
  const auto mode = mode_solve_numeric(spec, TauProvider::log_approx(1.0), t_grid, 1e-12, f0, fp0);
  return assemble(spec, mode, x_grid, exec);
}

PdeOracleResult pde_oracle(const ModeSpec& spec, const TauProvider& tau,
                           const std::vector<double>& t_grid, double length, std::size_t nx,
                           double tol, cplx f0, cplx fp0, Exec exec) {
  spec.validate();
  if (nx < 64) throw GridError("pde_oracle: nx >= 64 required");
  if (!(length > 0.0) || !std::isfinite(length)) throw DomainError("pde_oracle: length > 0 violated");
  const double wavelengths = spec.k * length / (2.0 * std::numbers::pi);
  const double m_int = std::round(wavelengths);
  if (m_int < 1.0 || std::abs(wavelengths - m_int) > 1e-9 * std::max(1.0, wavelengths)) {
    std::ostringstream msg;
    msg << "pde_oracle: domain mismatch, k length / (2 pi) = " << wavelengths << " is not an integer";
    throw DomainError(msg.str());
  }
  if (!(tol > 0.0 && tol <= 1e-3)) throw DomainError("pde_oracle: tol in (0, 1e-3] violated");
  check_grid(t_grid, tau.kind() == TauProvider::Kind::log_approx, "pde_oracle");
  if (t_grid.size() < 2) throw GridError("pde_oracle: at least two grid times required");

  const double t0 = t_grid.front();
  const double dx = length / static_cast<double>(nx);
  const double inv_dx2 = 1.0 / (dx * dx);
  std::vector<double> xs(nx);
  for (std::size_t j = 0; j < nx; ++j) xs[j] = static_cast<double>(j) * dx;

  const auto aux0 = tau.initial_aux(t0);
  const std::size_t dim = 4 * nx + aux0.size();
  std::vector<double> y0(dim);
  for (std::size_t j = 0; j < nx; ++j) {
    const cplx e = std::polar(1.0, spec.sign * spec.k * xs[j]);
    const cplx p = f0 * e, pt = fp0 * e;
    y0[j] = p.real();
    y0[nx + j] = p.imag();
    y0[2 * nx + j] = pt.real();
    y0[3 * nx + j] = pt.imag();
  }
  std::copy(aux0.begin(), aux0.end(), y0.begin() + 4 * nx);

  auto rhs = [&](double t, std::span<const double> y, std::span<double> dy) {
    const auto aux = y.subspan(4 * nx);
    const double mass = tau.mass_term(t, aux);
    kernels::wave_rhs(exec, y.first(4 * nx), nx, inv_dx2, mass, dy.first(4 * nx));
    if (!aux.empty()) tau.aux_rhs(t, aux, dy.subspan(4 * nx));
  };

  const double q0 = spec.k * spec.k + tau.mass_term(t0, aux0);
  OdeOptions opt;
  opt.rtol = tol;
  opt.atol = 1e-2 * tol * (std::abs(f0) + std::abs(fp0) / std::sqrt(q0));
  const auto sol = solve_sampled(rhs, y0, t0, t_grid.back(), t_grid, opt, false);
  if (sol.size() != t_grid.size()) throw GridError("pde_oracle: output grid not reproduced");

  PdeOracleResult out;
  out.stats = sol.stats;
  out.field.t = t_grid;
  out.field.x = xs;
  out.field.psi.resize(t_grid.size() * nx);
  auto& ex = out.extracted;
  ex.provenance = ModeSolution::Provenance::pde_extract;
  ex.t = t_grid;
  ex.stats = sol.stats;
  const std::size_t n = t_grid.size();
  ex.f.resize(n);
  ex.fp.resize(n);
  ex.mass.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = sol.row(i);
    for (std::size_t j = 0; j < nx; ++j) out.field.psi[i * nx + j] = {r[j], r[nx + j]};
    ex.f[i] = kernels::mode_amplitude(r.subspan(0, nx), r.subspan(nx, nx), xs, spec.k, spec.sign);
    ex.fp[i] = kernels::mode_amplitude(r.subspan(2 * nx, nx), r.subspan(3 * nx, nx), xs, spec.k, spec.sign);
    ex.mass[i] = spec.k * spec.k + tau.mass_term(t_grid[i], r.subspan(4 * nx));
  }
  if (n >= 5) {
    fill_grid_residual(ex);
  } else {
    ex.residual.assign(n, 0.0);
  }
  return out;
}

double relative_sup_error(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw std::invalid_argument("relative_sup_error: size mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max(den, std::abs(b[i]));
  }
  return den > 0.0 ? num / den : num;
}

void write_mode_csv(std::ostream& os, const ModeSolution& m) {
  csv::header(os, {"t", "re_f", "im_f", "re_fp", "im_fp", "residual"});
  for (std::size_t i = 0; i < m.size(); ++i) {
    csv::row(os, m.t[i], m.f[i].real(), m.f[i].imag(), m.fp[i].real(), m.fp[i].imag(), m.residual[i]);
  }
}

void write_field_csv(std::ostream& os, const Field& fld) {
  csv::header(os, {"t", "x", "re_psi", "im_psi"});
  for (std::size_t i = 0; i < fld.t.size(); ++i) {
    for (std::size_t j = 0; j < fld.x.size(); ++j) {
      const cplx p = fld.at(i, j);
      csv::row(os, fld.t[i], fld.x[j], p.real(), p.imag());
    }
  }
}

}  // namespace dissrel
