#include "dissrel/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "dissrel/approx_chain.hpp"
#include "dissrel/csv.hpp"
#include "dissrel/dynamics.hpp"
#include "dissrel/errors.hpp"
#include "dissrel/inverse.hpp"
#include "dissrel/modes.hpp"
#include "dissrel/ode.hpp"
#include "dissrel/variational.hpp"

namespace dissrel::cli {

namespace fs = std::filesystem;

namespace {

template <typename... Ts>
std::string cat(const Ts&... parts) {
  std::ostringstream s;
  (s << ... << parts);
  return s.str();
}

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

double positive(const RunConfig& cfg, const std::string& key, double fallback) {
  const double v = cfg.num(key, fallback);
  if (!(v > 0.0)) throw ConfigError(cat(key, "=", v, ": ", key, " > 0 violated"));
  return v;
}

double non_negative(const RunConfig& cfg, const std::string& key, double fallback) {
  const double v = cfg.num(key, fallback);
  if (!(v >= 0.0)) throw ConfigError(cat(key, "=", v, ": ", key, " >= 0 violated"));
  return v;
}

PotentialField potential_from(const RunConfig& cfg) {
  const std::string kind = cfg.str("potential", "zero");
  if (kind == "zero") return PotentialField::zero();
  if (kind == "linear") return PotentialField::linear(cfg.num("a", 1.0));
  if (kind == "harmonic") return PotentialField::harmonic(cfg.num("omega", 1.0));
  throw ConfigError("potential=" + kind + ": expected zero, linear or harmonic");
}

// Every `stride`-th row of a mode, keeping the last one; caps CSV sizes.
ModeSolution thin(const ModeSolution& m, std::size_t max_rows) {
  if (m.size() <= max_rows) return m;
  const std::size_t stride = (m.size() + max_rows - 1) / max_rows;
  ModeSolution out;
  out.provenance = m.provenance;
  for (std::size_t i = 0; i < m.size(); i += stride) {
    out.t.push_back(m.t[i]);
    out.f.push_back(m.f[i]);
    out.fp.push_back(m.fp[i]);
    out.mass.push_back(m.mass[i]);
    out.residual.push_back(m.residual[i]);
  }
  return out;
}

void mode_csv(BundleWriter& out, const std::string& name, const ModeSolution& m) {
  out.csv(name, [&](std::ostream& os) { write_mode_csv(os, m); }, "t", {"re_f", "im_f"});
}

}  // namespace

std::set<std::string> command_keys(const std::string& command) {
  if (command == "simulate") {
    return {"gamma", "c", "v0", "x0", "t_end", "tol", "potential", "a", "omega", "samples"};
  }
  if (command == "approx") return {"gamma", "t_min", "t_max", "n"};
  if (command == "modes") {
    return {"k", "gamma", "tau", "v0", "t_min", "t_max", "nt", "nx", "m", "tol", "sign"};
  }
  if (command == "inverse") {
    return {"force", "gamma", "omega", "c", "xmin", "xmax", "nx", "vmin", "vmax", "nv", "gauge", "gauge_a"};
  }
  if (command == "verify-all") return {};
  throw ConfigError("unknown command '" + command + "'");
}

Report study_simulate(const RunConfig& cfg, BundleWriter& out) {
  SimParams params;
  params.gamma = non_negative(cfg, "gamma", 1.0);
  params.c = positive(cfg, "c", 1.0);
  const double v0 = cfg.num("v0", 0.6);
  const double x0 = cfg.num("x0", 0.0);
  const double t_end = positive(cfg, "t_end", 10.0);
  const double tol = cfg.tol(1e-10);
  const std::size_t samples = cfg.count("samples", 256);
  if (!(std::abs(v0) < params.c)) {
    throw ConfigError(cat("v0=", v0, ": |v0| < c violated (c=", params.c, ")"));
  }
  if (samples < 2) throw ConfigError("samples >= 2 required");
  const auto U = potential_from(cfg);

  const State s0{0.0, x0, v0, 0.0};
  const auto traj = integrate_eom(s0, params, U, t_end, tol, {samples, true});
  out.csv("trajectory.csv", [&](std::ostream& os) { write_trajectory_csv(os, traj); }, "t", {"x", "v", "tau"});

  Report r;
  r.note(cat("gamma=", params.gamma, " c=", params.c, " v0=", v0, " potential=", U.name(), " t_end=", t_end,
             " tol=", tol));
  r.note(cat("integrator steps accepted=", traj.stats.steps, " rejected=", traj.stats.rejected,
             " speed-guard rejections=", traj.stats.guard_rejections));
  const State& last = traj.back();
  r.note(cat("final state t=", csv::num(last.t), " x=", csv::num(last.x), " v=", csv::num(last.v), " tau=",
             csv::num(last.tau)));

  if (U.kind() == PotentialField::Kind::zero) {
    const double p0 = canonical_momentum(traj.front(), params);
    double drift = 0.0;
    for (const auto& s : traj.samples) drift = std::max(drift, std::abs(canonical_momentum(s, params) - p0));
    if (p0 != 0.0) drift /= std::abs(p0);
    r.below("momentum_conservation", drift, 1e-8);
  } else {
    r.note("momentum_conservation skipped: the potential is not zero");
  }

  // Uniform resampling for the finite-difference checks.
  const SamplingOptions uniform{1024, false};
  const auto even = integrate_eom(s0, params, U, t_end, tol, uniform);
  const auto el = euler_lagrange_residual(even, U);
  out.csv("el_residual.csv", [&](std::ostream& os) {
    csv::header(os, {"t", "residual"});
    for (std::size_t i = 0; i < el.size(); ++i) csv::row(os, even.samples[i + 1].t, el[i]);
  }, "t", {"residual"});
  r.below("euler_lagrange_residual", max_of(el), 1e-5);

  double legendre = 0.0;
  for (const auto& s : traj.samples) {
    const CanonicalState cs{s.t, s.x, canonical_momentum(s, params), s.tau};
    const double h = hamiltonian_value(cs, params, U);
    legendre = std::max(legendre, std::abs(legendre_residual(s.t, s.x, s.v, s.tau, params, U)) / (1.0 + std::abs(h)));
  }
  r.at_most("legendre_residual", legendre, 1e-12);

  const CanonicalState c0{0.0, x0, canonical_momentum(s0, params), 0.0};
  const auto flow = hamilton_flow(c0, params, U, t_end, tol, uniform);
  if (flow.size() != even.size()) throw std::runtime_error("simulate: sample grids differ");
  double gap = 0.0;
  for (std::size_t i = 0; i < even.size(); ++i) gap = std::max(gap, std::abs(flow.samples[i].x - even.samples[i].x));
  out.csv("hamilton_flow.csv", [&](std::ostream& os) {
    csv::header(os, {"t", "x_eom", "x_hamilton", "diff"});
    for (std::size_t i = 0; i < even.size(); ++i) {
      csv::row(os, even.samples[i].t, even.samples[i].x, flow.samples[i].x, flow.samples[i].x - even.samples[i].x);
    }
  }, "t", {"diff"});
  r.below("hamilton_flow_agreement", gap, 1e-6);
  return r;
}

Report study_approx(const RunConfig& cfg, BundleWriter& out) {
  const double gamma = cfg.num("gamma", 4.0);
  if (!(gamma > 0.0)) throw ConfigError(cat("gamma=", gamma, ": gamma > 0 violated"));
  const double t_min = positive(cfg, "t_min", 0.55);
  const double t_max = cfg.num("t_max", 0.95);
  const std::size_t n = cfg.count("n", 81);
  if (!(t_max > t_min)) throw ConfigError("t_max > t_min required");
  if (n < 2) throw ConfigError("n >= 2 required");

  const auto grid = linspace(t_min, t_max, n);
  const auto rep = approx_chain_report(gamma, grid);
  out.csv("approx.csv", [&](std::ostream& os) { write_approx_csv(os, rep); }, "t",
          {"xi_exact", "xi_quad_minus", "tau_exact", "tau_log"});

  Report r;
  std::size_t inside = 0;
  for (auto w : rep.in_window) inside += w;
  std::ostringstream summary;
  if (rep.window_empty) {
    summary << "validity window 2/gamma < t < 1 is empty for gamma=" << gamma << " (needs gamma > 2)\n";
  } else {
    summary << "validity window 2/gamma < t < 1 = (" << 2.0 / gamma << ", 1); " << inside << " of " << n
            << " rows inside\n";
  }
  if (rep.negative_branch) {
    summary << "branch-sign audit: the retained root xi_- is negative on every row while xi_exact lies in (0, 1]\n";
  } else {
    summary << "branch-sign audit: no sign anomaly on this grid\n";
  }
  double max_err_tau = 0.0;
  for (double e : rep.err_tau) max_err_tau = std::max(max_err_tau, e);
  summary << "max |tau_log - tau_exact| = " << csv::num(max_err_tau) << "\n";
  out.text("summary.txt", summary.str());
  std::istringstream lines(summary.str());
  for (std::string line; std::getline(lines, line);) r.note(line);

  r.at_most("quadratic_roots", rep.max_quadratic_residual, 1e-12);
  // The particle slows down, so xi = sqrt(1 - v^2) grows.
  bool monotone = true;
  for (std::size_t i = 1; i < n; ++i) monotone = monotone && rep.xi_exact[i] > rep.xi_exact[i - 1];
  r.holds("xi_exact_increasing", monotone);
  bool finite = true;
  for (std::size_t i = 0; i < n; ++i) finite = finite && std::isfinite(rep.err_tau[i]) && std::isfinite(rep.err_xi[i]);
  r.holds("err_columns_finite", finite);
  r.holds("tau_log_at_1_is_zero", tau_log(1.0, gamma).value == 0.0);

  // Implicit solution along an integrated trajectory started from xi(0).
  const double xi0 = xi_exact(0.0, 1.0);
  const double v0 = std::sqrt((1.0 - xi0) * (1.0 + xi0));
  SimParams p;
  p.gamma = gamma;
  const auto traj = integrate_eom({0.0, 0.0, v0, 0.0}, p, PotentialField::zero(), 5.0 / gamma, 1e-12);
  double implicit = 0.0;
  for (const auto& s : traj.samples) implicit = std::max(implicit, implicit_solution_residual(s.t, s.v, gamma));
  r.below("implicit_solution", implicit, 1e-6);
  return r;
}

namespace {

void pde_checks(Report& r, BundleWriter& out, const ModeSpec& spec, const TauProvider& tau,
                const std::vector<double>& grid, double length, std::size_t nx, double tol, cplx f0,
                cplx fp0, const std::vector<cplx>& reference) {
  const auto coarse = pde_oracle(spec, tau, grid, length, nx, tol, f0, fp0);
  const auto fine = pde_oracle(spec, tau, grid, length, 2 * nx, tol, f0, fp0);
  const double e1 = relative_sup_error(coarse.extracted.f, reference);
  const double e2 = relative_sup_error(fine.extracted.f, reference);
  mode_csv(out, "mode_pde.csv", coarse.extracted);
  out.csv("pde_field.csv", [&](std::ostream& os) { write_field_csv(os, coarse.field); }, "", {});
  r.note(cat("pde nx=", nx, " steps accepted=", coarse.stats.accepted, " rejected=", coarse.stats.rejected,
             "; nx=", 2 * nx, " error=", csv::num(e2)));
  r.below(cat("pde_agreement_nx", nx), e1, 1e-3);
  r.at_least("pde_order", std::log2(e1 / e2), 1.8);
  r.below("pde_residual", max_of(coarse.extracted.residual), 1e-3);
}

}  // namespace

Report study_modes(const RunConfig& cfg, BundleWriter& out) {
  ModeSpec spec;
  spec.k = positive(cfg, "k", 1.0);
  spec.sign = cfg.integer("sign", 1);
  spec.validate();
  const double gamma = non_negative(cfg, "gamma", 4.0);
  const std::string tau_name = cfg.str("tau", gamma > 0.0 ? "log" : "none");
  const double tol = cfg.tol(1e-12);
  const std::size_t nx = cfg.count("nx", 128);
  const std::size_t m = cfg.count("m", 1);
  if (m < 1) throw ConfigError("m >= 1 required");
  const double length = 2.0 * std::numbers::pi * static_cast<double>(m) / spec.k;

  TauProvider tau = TauProvider::none();
  if (tau_name == "none") {
    if (gamma != 0.0) throw ConfigError("tau=none requires gamma=0");
  } else if (tau_name == "log") {
    if (!(gamma > 0.0)) throw ConfigError("tau=log requires gamma > 0");
    tau = TauProvider::log_approx(gamma);
  } else if (tau_name == "exact") {
    tau = cfg.has("v0") ? TauProvider::exact_from_eom(gamma, cfg.num("v0", 0.0)) : TauProvider::exact_from_eom(gamma);
  } else {
    throw ConfigError("tau=" + tau_name + ": expected log, exact or none");
  }

  Report r;
  r.note(cat("k=", spec.k, " gamma=", gamma, " tau=", tau.name(), " tol=", tol, " nx=", nx));
  const std::vector<double> x_field = [&] {
    std::vector<double> xs(32);
    for (std::size_t j = 0; j < xs.size(); ++j) xs[j] = length * static_cast<double>(j) / 32.0;
    return xs;
  }();

  if (tau.kind() == TauProvider::Kind::none) {
    const double t_min = non_negative(cfg, "t_min", 1.0);
    const double t_max = cfg.num("t_max", t_min + 40.0);
    const std::size_t nt = cfg.count("nt", 4001);
    if (!(t_max > t_min) || nt < 5) throw ConfigError("t_max > t_min and nt >= 5 required");
    const auto grid = linspace(t_min, t_max, nt);
    const auto num = mode_solve_numeric(spec, tau, grid, tol, 1.0, 0.0);
    mode_csv(out, "mode_numeric.csv", thin(num, 2001));
    const double omega = measure_frequency(num);
    const double expect = std::sqrt(spec.k * spec.k + 1.0);
    r.note(cat("measured omega=", csv::num(omega), " expected sqrt(k^2+1)=", csv::num(expect)));
    r.below("dispersion", std::abs(omega - expect), 1e-6);
    r.below("numeric_residual", max_of(num.residual), 1e-8);
    r.note("analytic Bessel mode needs the log provider; mode_analytic.csv not written");
    const auto fld = assemble(spec, thin(num, 101), x_field);
    out.csv("field.csv", [&](std::ostream& os) { write_field_csv(os, fld); }, "", {});

    // Plane wave exp(i(sign k x - omega t)) over one time unit.
    const auto pgrid = linspace(t_min, t_min + 1.0, 41);
    std::vector<cplx> ref(pgrid.size());
    for (std::size_t i = 0; i < pgrid.size(); ++i) ref[i] = std::exp(cplx(0.0, -expect * (pgrid[i] - t_min)));
    pde_checks(r, out, spec, tau, pgrid, length, nx, std::max(tol, 1e-10), 1.0, cplx(0.0, -expect), ref);
    return r;
  }

  const double t_min = positive(cfg, "t_min", 0.55);
  const double t_max = cfg.num("t_max", 0.95);
  // e^{2 gamma tau} from the exact proper time is large; resolve the faster oscillation.
  const std::size_t nt = cfg.count("nt", tau.kind() == TauProvider::Kind::exact_from_eom ? 801 : 81);
  if (!(t_max > t_min) || nt < 5) throw ConfigError("t_max > t_min and nt >= 5 required");
  if (t_min < 0.05) throw ConfigError("t_min >= 0.05 required (1/t^2 term of the mode equation)");
  const auto grid = linspace(t_min, t_max, nt);
  if (gamma > 0.0) {
    std::size_t inside = 0;
    for (double t : grid) inside += in_validity_window(t, gamma) ? 1 : 0;
    r.note(cat(inside, " of ", nt, " grid times inside 2/gamma < t < 1"));
  }

  const auto an = mode_analytic(spec, grid);
  mode_csv(out, "mode_analytic.csv", an);
  const auto [f0, fp0] = analytic_initial_data(spec, t_min);
  const auto num = mode_solve_numeric(spec, tau, grid, tol, f0, fp0);
  mode_csv(out, "mode_numeric.csv", num);
  r.below("numeric_residual", max_of(num.residual), 1e-8);

  if (tau.kind() == TauProvider::Kind::log_approx) {
    r.below("analytic_residual", max_of(an.residual), 1e-8);
    r.below("analytic_numeric_agreement", relative_sup_error(num.f, an.f), 1e-8);
    const auto fld = assemble(spec, thin(an, 101), x_field);
    out.csv("field.csv", [&](std::ostream& os) { write_field_csv(os, fld); }, "", {});
  } else {
    const auto logm = mode_solve_numeric(spec, TauProvider::log_approx(std::max(gamma, 1e-300)), grid, tol, f0, fp0);
    r.note(cat("exact vs log provider, relative difference of f: ", csv::num(relative_sup_error(num.f, logm.f))));
    const auto fld = assemble(spec, thin(num, 101), x_field);
    out.csv("field.csv", [&](std::ostream& os) { write_field_csv(os, fld); }, "", {});
  }
  pde_checks(r, out, spec, tau, grid, length, nx, std::max(tol, 1e-10), f0, fp0, num.f);
  return r;
}

Report study_inverse(const RunConfig& cfg, BundleWriter& out) {
  const std::string kind = cfg.str("force", "linear-drag");
  const double gamma = non_negative(cfg, "gamma", 1.0);
  const bool relativistic = kind == "relativistic-drag";
  ForceSpec F = ForceSpec::harmonic(1.0);
  if (kind == "harmonic") {
    F = ForceSpec::harmonic(cfg.num("omega", 1.0));
  } else if (kind == "linear-drag") {
    F = ForceSpec::linear_drag(gamma);
  } else if (relativistic) {
    SimParams p;
    p.gamma = gamma;
    p.c = positive(cfg, "c", 1.0);
    F = ForceSpec::relativistic_drag(p, PotentialField::zero());
  } else {
    throw ConfigError("force=" + kind + ": unsupported force (harmonic, linear-drag, relativistic-drag)");
  }
  const double xmin = cfg.num("xmin", 0.0), xmax = cfg.num("xmax", 1.0);
  const double vmin = cfg.num("vmin", 0.1), vmax = cfg.num("vmax", relativistic ? 0.9 : 2.0);
  const std::size_t nx = cfg.count("nx", relativistic ? 41 : 21);
  const std::size_t nv = cfg.count("nv", 381);
  if (!(xmax > xmin) || !(vmax > vmin)) throw ConfigError("xmax > xmin and vmax > vmin required");
  if (nx < 7 || nv < 7) throw ConfigError("nx >= 7 and nv >= 7 required");

  const std::string gauge_name = cfg.str("gauge", "force-matched");
  const double ga = cfg.num("gauge_a", 1.0);
  Gauge gauge = Gauge::zero();
  if (gauge_name == "force-matched") {
    gauge = Gauge::force_matched(F);
  } else if (gauge_name == "linear") {
    gauge = Gauge::linear(ga);
  } else if (gauge_name == "quadratic") {
    gauge = Gauge::quadratic(ga);
  } else if (gauge_name != "zero") {
    throw ConfigError("gauge=" + gauge_name + ": expected force-matched, zero, linear or quadratic");
  }

  const auto xs = linspace(xmin, xmax, nx);
  const auto vs = linspace(vmin, vmax, nv);
  const auto G = inverse_G(F, xs, vs);
  const auto L = lagrangian_from_G(G, gauge);
  out.csv("g_field.csv", [&](std::ostream& os) { write_gfield_csv(os, G); }, "v", {"G"});
  out.csv("lagrangian.csv", [&](std::ostream& os) { write_lagrangian_csv(os, L); }, "v", {"L"});
  const auto fel = el_force(L);
  out.csv("el_force.csv", [&](std::ostream& os) {
    csv::header(os, {"x", "v", "F", "F_el"});
    for (std::size_t i = 0; i < nx; ++i) {
      for (std::size_t j = 0; j < nv; ++j) csv::row(os, xs[i], vs[j], F.evaluate(0.0, xs[i], vs[j]), fel[i * nv + j]);
    }
  }, "v", {"F", "F_el"});

  Report r;
  r.note(cat("force=", F.name(), " gauge f2=", gauge.name(), " grid ", nx, "x", nv));
  r.below("g_pde_residual", gfield_pde_residual(G, F), 1e-5);
  const double el = el_reproduction_residual(L, F);
  r.below("el_reproduction", el, 1e-4);
  if (F.velocity_independent()) {
    double dev = 0.0;
    for (double g : G.values) dev = std::max(dev, std::abs(g - 1.0));
    r.at_most("g_identically_one", dev, 1e-10);
  }
  r.below("quadrature_consistency", quadrature_consistency(L, G), 1e-4);
  const auto gauged = add_linear_gauge(L, [](double x) { return std::sin(x); }, "sin(x)");
  const auto fel2 = el_force(gauged);
  double shift = 0.0;
  for (std::size_t i = 1; i + 1 < nx; ++i) {
    for (std::size_t j = 1; j + 1 < nv; ++j) {
      const std::size_t idx = i * nv + j;
      shift = std::max(shift, std::abs(fel2[idx] - fel[idx]) / (1.0 + std::abs(F.evaluate(0.0, xs[i], vs[j]))));
    }
  }
  r.below("gauge_invariance", shift, 1e-8);
  return r;
}

namespace {

using Study = Report (*)(const RunConfig&, BundleWriter&);

struct Job {
  std::string subdir;  // empty: the bundle root itself
  Study study;
  RunConfig cfg;
};

Study study_for(const std::string& command) {
  if (command == "simulate") return study_simulate;
  if (command == "approx") return study_approx;
  if (command == "modes") return study_modes;
  if (command == "inverse") return study_inverse;
  throw ConfigError("unknown command '" + command + "'");
}

Report run_job(const Job& job, const fs::path& root) {
  BundleWriter w(job.subdir.empty() ? root : root / job.subdir);
  Report r = job.study(job.cfg, w);
  w.report(r);
  w.plot_script();
  return r;
}

std::vector<Report> run_jobs(const std::vector<Job>& jobs, const fs::path& root, std::size_t parallel) {
  std::vector<Report> reports(jobs.size());
  const std::size_t workers = std::min(std::max<std::size_t>(parallel, 1), jobs.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) reports[i] = run_job(jobs[i], root);
    return reports;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first;
  std::mutex guard;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < jobs.size(); i = next++) {
        try {
          reports[i] = run_job(jobs[i], root);
        } catch (...) {
          std::lock_guard lock(guard);
          if (!first) first = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
  return reports;
}

RunConfig preset(const std::string& command, std::initializer_list<std::pair<const char*, const char*>> kv) {
  RunConfig c(command_keys(command));
  for (const auto& [k, v] : kv) c.set(k, v);
  return c;
}

std::vector<Job> verify_all_jobs() {
  return {
      {"simulate", study_simulate, preset("simulate", {})},
      {"simulate-harmonic", study_simulate, preset("simulate", {{"potential", "harmonic"}})},
      {"approx", study_approx, preset("approx", {{"gamma", "4"}})},
      {"approx-gamma1", study_approx, preset("approx", {{"gamma", "1"}})},
      {"modes-dispersion-k0.5", study_modes, preset("modes", {{"gamma", "0"}, {"k", "0.5"}})},
      {"modes-dispersion-k1", study_modes, preset("modes", {{"gamma", "0"}, {"k", "1"}})},
      {"modes-dispersion-k2", study_modes, preset("modes", {{"gamma", "0"}, {"k", "2"}})},
      {"modes-log", study_modes, preset("modes", {{"gamma", "4"}, {"tau", "log"}})},
      {"inverse-harmonic", study_inverse, preset("inverse", {{"force", "harmonic"}})},
      {"inverse-linear-drag", study_inverse, preset("inverse", {{"force", "linear-drag"}})},
  };
}

}  // namespace

int run(const Invocation& inv, std::ostream& out, std::ostream& err) {
  try {
    std::vector<Job> jobs;
    std::vector<RunConfig> cases;
    if (inv.command == "verify-all") {
      if (!inv.config.values().empty()) throw ConfigError("verify-all takes no keys");
      jobs = verify_all_jobs();
    } else {
      const Study study = study_for(inv.command);
      cases = expand_sweep(inv.config);
      if (cases.size() == 1) {
        jobs.push_back({"", study, cases.front()});
      } else {
        for (std::size_t i = 0; i < cases.size(); ++i) {
          char name[32];
          std::snprintf(name, sizeof name, "case-%03zu", i);
          jobs.push_back({name, study, cases[i]});
        }
      }
    }

    StagedDir stage(inv.out_root, inv.command);
    const auto reports = run_jobs(jobs, stage.path(), inv.parallel);
    Report total;
    if (jobs.size() == 1 && jobs.front().subdir.empty()) {
      total = reports.front();
    } else {
      BundleWriter top(stage.path());
      std::vector<std::string> subdirs;
      for (std::size_t i = 0; i < jobs.size(); ++i) {
        total.merge(reports[i], jobs[i].subdir + "/");
        subdirs.push_back(jobs[i].subdir);
      }
      if (!cases.empty()) {
        top.csv("cases.csv", [&](std::ostream& os) {
          os << "case";
          for (const auto& [k, v] : cases.front().values()) os << ',' << k;
          os << '\n';
          for (std::size_t i = 0; i < cases.size(); ++i) {
            os << jobs[i].subdir;
            for (const auto& [k, v] : cases[i].values()) os << ',' << v;
            os << '\n';
          }
        }, "", {});
      }
      top.report(total);
      top.plot_script(subdirs);
    }
    stage.commit();
    total.write(out);
    out << "bundle: " << stage.final_path().string() << '\n';
    return std::min(total.failures(), 125);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dissipative relativistic particle studies: trajectories, Lagrangians, approximations, wave modes"};
  app.require_subcommand(1, 1);
  std::string config_path, out_dir;
  std::size_t parallel = 1;
  app.add_option("--config", config_path, "key=value file; command-line pairs override it");
  app.add_option("--out", out_dir, "output directory (default $DISSREL_OUT or ./dissrel-out)");
  app.add_option("--parallel", parallel, "run independent cases on n threads")->check(CLI::PositiveNumber);
  std::vector<std::string> pairs;
  const std::vector<std::pair<std::string, std::string>> help = {
      {"simulate", "integrate the damped relativistic equation of motion and verify it"},
      {"approx", "audit the quadratic and logarithmic approximations"},
      {"modes", "Bessel and numeric wave modes, dispersion, PDE cross-check"},
      {"inverse", "construct a Lagrangian for a force via the inverse problem"},
      {"verify-all", "run every study with its reference settings"}};
  for (const auto& [name, text] : help) {
    auto* sc = app.add_subcommand(name, text);
    sc->fallthrough();
    sc->add_option("pairs", pairs, "key=value settings; comma-separated values sweep");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  Invocation inv;
  inv.command = app.get_subcommands().front()->get_name();
  inv.parallel = parallel;
  try {
    inv.config = RunConfig(command_keys(inv.command));
    if (!config_path.empty()) inv.config.load_file(config_path);
    for (const auto& p : pairs) inv.config.set_assignment(p);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  if (!out_dir.empty()) {
    inv.out_root = out_dir;
  } else if (const char* env = std::getenv("DISSREL_OUT"); env != nullptr && *env != '\0') {
    inv.out_root = env;
  } else {
    inv.out_root = "dissrel-out";
  }
  return run(inv, out, err);
}

}  // namespace dissrel::cli
