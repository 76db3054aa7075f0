// One line per acceptance criterion; exit code is the number of FAIL lines.
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "dissrel/approx_chain.hpp"
#include "dissrel/dynamics.hpp"
#include "dissrel/inverse.hpp"
#include "dissrel/modes.hpp"
#include "dissrel/ode.hpp"
#include "dissrel/special.hpp"
#include "dissrel/variational.hpp"

using namespace dissrel;

namespace {

const double kPi = std::numbers::pi;

int failures = 0;

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

// Each criterion returns its own verdict and a one-line detail.
struct Outcome {
  bool ok;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

void criterion(int id, const char* name, const std::function<Outcome()>& body) {
  Outcome o{false, ""};
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.ok) ++failures;
  std::printf("%s %2d %-28s %s\n", o.ok ? "PASS" : "FAIL", id, name, o.detail.c_str());
  std::fflush(stdout);
}

double conserved(const State& s) { return s.v * std::exp(s.tau) / std::sqrt(1.0 - s.v * s.v); }

}  // namespace

int main() {
  const SimParams ref{1.0, 1.0};
  const auto zero = PotentialField::zero();
  const auto harm = PotentialField::harmonic(1.0);

  criterion(1, "free_particle_conservation", [&] {
    const double tol_drift = 1e-8, tol_ref = 1e-7;
    const auto tr = integrate_eom({0, 0, 0.6, 0}, ref, zero, 10.0, 1e-10, {256, false});
    const auto tight = integrate_eom({0, 0, 0.6, 0}, ref, zero, 10.0, 1e-12, {256, false});
    const double q0 = conserved(tr.front());
    double drift = 0, vs_ref = 0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
      drift = std::max(drift, std::abs(conserved(tr.samples[i]) - q0) / std::abs(q0));
      vs_ref = std::max(vs_ref, std::abs(tr.samples[i].x - tight.samples[i].x));
    }
    return Outcome{drift < tol_drift && vs_ref < tol_ref,
                   fmt("drift=%.3e (<%.0e) |x-x_ref|=%.3e (<%.0e)", drift, tol_drift, vs_ref, tol_ref)};
  });

  criterion(2, "dual_formulation", [&] {
    const double tol = 1e-6;
    double worst = 0;
    for (double g : {0.0, 1.0}) {
      for (int u = 0; u < 2; ++u) {
        const auto& U = u ? harm : zero;
        const double x0 = u ? 0.5 : 0.0, v0 = u ? 0.3 : 0.6;
        const SimParams p{g, 1.0};
        const State s0{0, x0, v0, 0};
        const auto a = integrate_eom(s0, p, U, 5.0, 1e-10, {512, false});
        const auto b = hamilton_flow({0, x0, canonical_momentum(s0, p), 0}, p, U, 5.0, 1e-10, {512, false});
        for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a.samples[i].x - b.samples[i].x));
      }
    }
    return Outcome{worst < tol, fmt("sup|x_EL - x_H|=%.3e (<%.0e)", worst, tol)};
  });

  criterion(3, "euler_lagrange", [&] {
    const double tol = 1e-5;
    const auto tr = integrate_eom({0, 0, 0.6, 0}, ref, zero, 10.0, 1e-10, {1024, false});
    const double r = max_of(euler_lagrange_residual(tr, zero));
    return Outcome{tr.size() == 1024 && r < tol, fmt("max scaled residual=%.3e (<%.0e) samples=%.0f", r, tol, double(tr.size()))};
  });

  criterion(4, "cross_partial_pde", [&] {
    const double tol = 1e-4, tol_ck = 1e-7;
    const auto tr = integrate_eom({0, 0, 0.6, 0}, ref, zero, 10.0, 1e-10, {256, false});
    const auto F = ForceSpec::relativistic_drag(ref, zero);
    double rel = 0, frozen = 0;
    for (const auto& s : tr.samples) {
      rel = std::max(rel, lagrangian_pde_residual(LagrangianKind::relativistic, F, ref, zero, s).scaled);
      frozen = std::max(frozen, lagrangian_pde_residual(LagrangianKind::relativistic, F, ref, zero, s,
                                                        TauRate::trajectory_velocity).scaled);
    }
    double ck = 0;
    for (double t : {0.0, 1.0, 3.0, 10.0}) {
      for (double v : {-0.5, 0.1, 0.6, 2.0}) {
        ck = std::max(ck, lagrangian_pde_residual(LagrangianKind::caldirola_kanai, ForceSpec::linear_drag(1.0), ref,
                                                  zero, {t, 0.3, v, 0})
                              .scaled);
      }
    }
    return Outcome{rel < tol && ck <= tol_ck,
                   fmt("relativistic=%.3e (<%.0e) ck=%.3e (<=%.0e)", rel, tol, ck, tol_ck) +
                       fmt(" frozen-rate audit=%.3e", frozen)};
  });

  criterion(5, "caldirola_kanai_reduction", [&] {
    const double min_slope = 1.8;
    const std::vector<double> v0 = {0.02, 0.04, 0.08};
    std::vector<double> gap;
    for (double v : v0) gap.push_back(ck_relative_gap(v, 1.0, 1.0));
    const double slope = fitted_order(v0, gap);
    return Outcome{slope >= min_slope, fmt("slope=%.4f (>=%.1f) gaps=%.2e..%.2e", slope, min_slope, gap.front(), gap.back())};
  });

  criterion(6, "inverse_problem", [&] {
    const double tol_pde = 1e-5, tol_el = 1e-4, tol_one = 1e-10;
    const auto xs = linspace(0.0, 1.0, 21), vs = linspace(0.1, 2.0, 381);
    const auto F = ForceSpec::linear_drag(1.0);
    const auto G = inverse_G(F, xs, vs);
    const double pde = gfield_pde_residual(G, F);
    const double el = el_reproduction_residual(lagrangian_from_G(G, Gauge::force_matched(F)), F);
    // closed form along characteristics: G = 1 + gamma (x - x_min) / v
    double closed = 0;
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t j = 0; j < vs.size(); ++j) closed = std::max(closed, std::abs(G.at(i, j) - (1 + xs[i] / vs[j])));
    double one = 0;
    for (double g : inverse_G(ForceSpec::harmonic(1.0), xs, vs).values) one = std::max(one, std::abs(g - 1.0));
    return Outcome{pde < tol_pde && el < tol_el && one <= tol_one && closed < 1e-8,
                   fmt("pde=%.3e (<%.0e) el=%.3e (<%.0e)", pde, tol_pde, el, tol_el) +
                       fmt(" |G-1|=%.3e (<=%.0e) |G-closed|=%.3e", one, tol_one, closed)};
  });

  criterion(7, "implicit_solution", [&] {
    const double tol = 1e-6, gamma = 1.0;
    // independent root of u atanh(u) = 1 by Newton
    double u = 0.8;
    for (int i = 0; i < 50; ++i) u -= (u * std::atanh(u) - 1.0) / (std::atanh(u) + u / (1 - u * u));
    const double v0 = std::sqrt(1.0 - u * u);
    const auto tr = integrate_eom({0, 0, v0, 0}, {gamma, 1.0}, zero, 5.0 / gamma, 1e-12);
    double r = 0;
    for (const auto& s : tr.samples) r = std::max(r, implicit_solution_residual(s.t, s.v, gamma));
    return Outcome{r < tol && std::abs(xi_exact(0, gamma) - u) < 1e-11,
                   fmt("max|LHS-RHS|=%.3e (<%.0e) xi0=%.15f", r, tol, u)};
  });

  criterion(8, "approximation_audit", [&] {
    const double tol = 1e-12;
    const auto g4 = approx_chain_report(4.0, linspace(0.55, 0.95, 81));
    const auto g1 = approx_chain_report(1.0, linspace(0.05, 0.95, 19));
    const auto g2 = approx_chain_report(2.0, linspace(0.05, 0.95, 19));
    const bool flags = !g4.window_empty && g1.window_empty && g2.window_empty && g4.negative_branch &&
                       g1.negative_branch;
    bool any1 = false;
    for (auto w : g1.in_window) any1 = any1 || w;
    const double res = std::max(g4.max_quadratic_residual, g1.max_quadratic_residual);
    const double tau1 = tau_log(1.0, 4.0).value;
    return Outcome{res < tol && flags && !any1 && tau1 == 0.0,
                   fmt("quadratic=%.3e (<%.0e) tau_log(1)=%g flags=%g", res, tol, tau1, flags ? 1.0 : 0.0)};
  });

  criterion(9, "bessel_modes", [&] {
    const double tol_res = 1e-8, tol_agree = 1e-8;
    ModeSpec s;
    const double r = max_of(mode_analytic_basis(s, linspace(0.1, 10.0, 991), 1.0, 0.0).residual);
    const auto w = linspace(0.55, 0.95, 81);
    const auto a = mode_analytic(s, w);
    const auto n = mode_solve_numeric(s, TauProvider::log_approx(4.0), w, 1e-12, a.f[0], a.fp[0]);
    const double agree = relative_sup_error(n.f, a.f);
    return Outcome{r < tol_res && agree < tol_agree,
                   fmt("residual=%.3e (<%.0e) analytic-vs-numeric=%.3e (<%.0e)", r, tol_res, agree, tol_agree)};
  });

  criterion(10, "dispersion_limit", [&] {
    const double tol = 1e-6;
    double worst = 0;
    for (double k : {0.5, 1.0, 2.0}) {
      ModeSpec s;
      s.k = k;
      const auto m = mode_solve_numeric(s, TauProvider::none(), linspace(1.0, 41.0, 4001), 1e-12, 1.0, 0.0);
      worst = std::max(worst, std::abs(measure_frequency(m) - std::sqrt(k * k + 1.0)));
    }
    return Outcome{worst < tol, fmt("max|omega - sqrt(k^2+1)|=%.3e (<%.0e)", worst, tol)};
  });

  criterion(11, "pde_oracle", [&] {
    const double tol = 1e-3, min_order = 1.8;
    ModeSpec s;
    const auto w = linspace(0.55, 0.95, 81);
    const auto a = mode_analytic(s, w);
    const auto sep = mode_solve_numeric(s, TauProvider::log_approx(4.0), w, 1e-12, a.f[0], a.fp[0]);
    double e[2];
    int i = 0;
    for (std::size_t nx : {128u, 256u}) {
      const auto p = pde_oracle(s, TauProvider::log_approx(4.0), w, 2 * kPi, nx, 1e-10, a.f[0], a.fp[0]);
      e[i++] = relative_sup_error(p.extracted.f, sep.f);
    }
    const double order = std::log2(e[0] / e[1]);
    return Outcome{e[0] < tol && order >= min_order,
                   fmt("err_nx128=%.3e (<%.0e) order=%.3f (>=%.1f)", e[0], tol, order, min_order)};
  });

  criterion(12, "special_functions", [&] {
    const double tol_exact = 1e-14, tol = 1e-12;
    const double g1 = std::abs(complex_gamma(1.0) - 1.0);
    const double gh = std::abs(complex_gamma(0.5) - std::sqrt(kPi));
    const double m = std::norm(complex_gamma({1.0, 1.0}));
    const double mod = std::abs(m - kPi / std::sinh(kPi)) / (kPi / std::sinh(kPi));
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> re(-5.0, 10.0), im(-5.0, 5.0);
    double rec = 0;
    for (int i = 0; i < 20; ++i) {
      const std::complex<double> z(re(rng), im(rng));
      const auto lhs = complex_gamma(z + 1.0);
      rec = std::max(rec, std::abs(lhs - z * complex_gamma(z)) / std::abs(lhs));
    }
    return Outcome{g1 < tol_exact && gh < tol_exact && mod < tol && rec < tol,
                   fmt("|G(1)-1|=%.1e |G(.5)-sqrt(pi)|=%.1e |G(1+i)|^2=%.1e rec=%.1e", g1, gh, mod, rec)};
  });

  std::printf("criteria=12 failed=%d\n", failures);
  return failures;
}
