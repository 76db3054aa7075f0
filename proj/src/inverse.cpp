#include "dissrel/inverse.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <sstream>

#include "dissrel/csv.hpp"
#include "dissrel/errors.hpp"
#include "dissrel/finite_diff.hpp"
#include "dissrel/ode.hpp"

namespace dissrel {

namespace {

constexpr double kTraceTol = 1e-12;
// Characteristics slower than this fraction of the velocity scale count as stalled.
constexpr double kStallFraction = 1e-6;

void require_increasing(const std::vector<double>& g, std::size_t min_size, const char* what) {
  if (g.size() < min_size) {
    std::ostringstream msg;
    msg << what << " needs at least " << min_size << " nodes";
    throw GridError(msg.str());
  }
  for (std::size_t i = 1; i < g.size(); ++i) {
    if (!(g[i] > g[i - 1])) throw GridError(std::string(what) + " must be strictly increasing");
  }
}

// Running integral of uniformly sampled f from the first node; each interval
// uses the cubic through its four nearest nodes.
std::vector<double> cumulative_integral(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    double piece;
    if (j == 0) {
      piece = 9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3];
    } else if (j + 2 == n) {
      piece = f[j - 2] - 5.0 * f[j - 1] + 19.0 * f[j] + 9.0 * f[j + 1];
    } else {
      piece = -f[j - 1] + 13.0 * f[j] + 13.0 * f[j + 1] - f[j + 2];
    }
    out[j + 1] = out[j] + piece * h / 24.0;
  }
  return out;
}

std::size_t stencil_width(std::size_t n) { return std::min<std::size_t>(7, n); }

// Derivative of order m along x (axis 0) or v (axis 1) of a row-major field.
std::vector<double> grid_derivative(const std::vector<double>& xs, const std::vector<double>& vs,
                                    const std::vector<double>& values, int axis, int m) {
  const std::size_t nx = xs.size(), nv = vs.size();
  std::vector<double> out(values.size());
  if (axis == 1) {
    for (std::size_t i = 0; i < nx; ++i) {
      std::span<const double> line(values.data() + i * nv, nv);
      const auto d = fd_derivative(vs, line, m, stencil_width(nv));
      std::copy(d.begin(), d.end(), out.begin() + static_cast<std::ptrdiff_t>(i * nv));
    }
  } else {
    std::vector<double> line(nx);
    for (std::size_t j = 0; j < nv; ++j) {
      for (std::size_t i = 0; i < nx; ++i) line[i] = values[i * nv + j];
      const auto d = fd_derivative(xs, line, m, stencil_width(nx));
      for (std::size_t i = 0; i < nx; ++i) out[i * nv + j] = d[i];
    }
  }
  return out;
}

}  // namespace

GField GField::analytic(std::vector<double> xs, std::vector<double> vs,
                        const std::function<double(double, double)>& g) {
  GField out;
  out.xs = std::move(xs);
  out.vs = std::move(vs);
  out.provenance = Provenance::analytic;
  out.values.reserve(out.xs.size() * out.vs.size());
  for (double x : out.xs) {
    for (double v : out.vs) out.values.push_back(g(x, v));
  }
  return out;
}

Gauge Gauge::force_matched(const ForceSpec& F) {
  Gauge g(Kind::force_matched, 0.0);
  g.force_ = F;
  return g;
}

std::string Gauge::name() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::zero: return "0";
    case Kind::linear: os << a_ << "*x"; break;
    case Kind::quadratic: os << a_ << "*x^2/2"; break;
    case Kind::force_matched: os << "force-matched(" << force_->name() << ")"; break;
  }
  return os.str();
}

GField inverse_G(const ForceSpec& F, const std::vector<double>& xs, const std::vector<double>& vs,
                 Exec exec) {
  require_increasing(xs, 1, "inverse_G: x-grid");
  require_increasing(vs, 1, "inverse_G: v-grid");

  const double v_scale = std::max(std::abs(vs.front()), std::abs(vs.back()));
  const double v_stall = kStallFraction * v_scale;

  // A stationary point of the characteristic flow (v = 0, F = 0) inside the
  // grid splits it into regions no single seed line can reach.
  if (vs.front() <= 0.0 && vs.back() >= 0.0) {
    for (double x : xs) {
      const double f0 = F.evaluate(0.0, x, 0.0);
      const double f_scale = std::abs(F.evaluate(0.0, x, v_scale)) + std::abs(F.dfdv(0.0, x, 0.0)) * v_scale;
      if (std::abs(f0) <= 1e-12 * std::max(f_scale, 1e-300) || f0 == 0.0) {
        std::ostringstream msg;
        msg << "inverse_G: characteristic degeneracy: v = 0 and F = 0 at x = " << x
            << " inside the grid (" << F.name() << ")";
        throw DegeneracyError(msg.str());
      }
    }
  }

  GField out;
  out.xs = xs;
  out.vs = vs;
  out.provenance = GField::Provenance::characteristic_solve;
  out.values.assign(xs.size() * vs.size(), 1.0);
  const double x_seed = xs.front();

  kernels::for_each_index(exec, out.values.size(), [&](std::size_t idx) {
    const std::size_t ix = idx / vs.size();
    const std::size_t iv = idx % vs.size();
    const double x0 = xs[ix];
    const double v0 = vs[iv];
    if (ix == 0) return;
    if (std::abs(v0) < v_stall) {
      std::ostringstream msg;
      msg << "inverse_G: characteristic degeneracy at (x=" << x0 << ", v=" << v0 << ")";
      throw DegeneracyError(msg.str());
    }
    // Parametrize by s = x0 - x and walk back to the seed line.
    // y = (v, log G(x0,v0) - log G(x,v))
    OdeRhs rhs = [&F, x0](double s, std::span<const double> y, std::span<double> dy) {
      const double x = x0 - s;
      dy[0] = -F.evaluate(0.0, x, y[0]) / y[0];
      dy[1] = F.dfdv(0.0, x, y[0]) / y[0];
    };
    OdeOptions opt;
    opt.rtol = kTraceTol;
    opt.atol = kTraceTol * v_scale;
    opt.guard = [v_stall](double, std::span<const double> y) { return std::abs(y[0]) < v_stall; };
    std::array<double, 2> y{v0, 0.0};
    try {
      DormandPrince(rhs, 2, opt).integrate(0.0, y, x0 - x_seed);
    } catch (const StepFailure&) {
      std::ostringstream msg;
      msg << "inverse_G: characteristic through (x=" << x0 << ", v=" << v0
          << ") does not reach the seed line x=" << x_seed;
      throw CoverageError(msg.str());
    } catch (const DomainError&) {
      std::ostringstream msg;
      msg << "inverse_G: characteristic through (x=" << x0 << ", v=" << v0
          << ") leaves the force's domain before the seed line";
      throw CoverageError(msg.str());
    }
    out.values[idx] = std::exp(-y[1]);
  });

  for (double g : out.values) {
    if (!std::isfinite(g) || g == 0.0) throw DegeneracyError("inverse_G: degenerate G value");
  }
  return out;
}

LagrangianTable lagrangian_from_G(const GField& G, const Gauge& f2) {
  const std::size_t nx = G.xs.size(), nv = G.vs.size();
  if (nv < 4) throw GridError("lagrangian_from_G: grid too coarse (need at least 4 velocity nodes)");
  if (!is_uniform(G.vs)) throw GridError("lagrangian_from_G: velocity grid must be uniform");
  const double hv = (G.vs.back() - G.vs.front()) / static_cast<double>(nv - 1);

  std::vector<double> gauge(nx, 0.0);
  switch (f2.kind()) {
    case Gauge::Kind::zero: break;
    case Gauge::Kind::linear:
      for (std::size_t i = 0; i < nx; ++i) gauge[i] = f2.coefficient() * G.xs[i];
      break;
    case Gauge::Kind::quadratic:
      for (std::size_t i = 0; i < nx; ++i) gauge[i] = 0.5 * f2.coefficient() * G.xs[i] * G.xs[i];
      break;
    case Gauge::Kind::force_matched: {
      if (nx == 1) break;
      if (nx < 4) throw GridError("lagrangian_from_G: grid too coarse (force-matched gauge needs 4 position nodes)");
      if (!is_uniform(G.xs)) throw GridError("lagrangian_from_G: position grid must be uniform");
      const double hx = (G.xs.back() - G.xs.front()) / static_cast<double>(nx - 1);
      const double va = G.vs.front();
      std::vector<double> slope(nx);
      for (std::size_t i = 0; i < nx; ++i) slope[i] = -G.at(i, 0) * f2.force()->evaluate(0.0, G.xs[i], va);
      gauge = cumulative_integral(slope, hx);
      break;
    }
  }

  LagrangianTable table;
  table.xs = G.xs;
  table.vs = G.vs;
  table.values.resize(nx * nv);
  table.f2_name = f2.name();
  for (std::size_t i = 0; i < nx; ++i) {
    std::span<const double> g(G.values.data() + i * nv, nv);
    const auto first = cumulative_integral(g, hv);
    const auto second = cumulative_integral(first, hv);
    for (std::size_t j = 0; j < nv; ++j) table.values[i * nv + j] = second[j] - gauge[i];
  }
  return table;
}

LagrangianTable add_linear_gauge(const LagrangianTable& table,
                                 const std::function<double(double)>& f1, const std::string& name) {
  LagrangianTable out = table;
  const std::size_t nv = table.vs.size();
  for (std::size_t i = 0; i < table.xs.size(); ++i) {
    const double a = f1(table.xs[i]);
    for (std::size_t j = 0; j < nv; ++j) out.values[i * nv + j] += a * table.vs[j];
  }
  out.f1_name = name;
  return out;
}

double gfield_pde_residual(const GField& G, const ForceSpec& F) {
  const std::size_t nx = G.xs.size(), nv = G.vs.size();
  if (nx < 3 || nv < 3) throw GridError("gfield_pde_residual: need at least 3x3 nodes");
  const auto gx = grid_derivative(G.xs, G.vs, G.values, 0, 1);
  const auto gv = grid_derivative(G.xs, G.vs, G.values, 1, 1);
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < nx; ++i) {
    for (std::size_t j = 1; j + 1 < nv; ++j) {
      const std::size_t k = i * nv + j;
      const double x = G.xs[i], v = G.vs[j];
      const double a = v * gx[k];
      const double b = F.evaluate(0.0, x, v) * gv[k];
      const double c = F.dfdv(0.0, x, v) * G.values[k];
      const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
      if (scale > 0.0) worst = std::max(worst, std::abs(a + b + c) / scale);
    }
  }
  return worst;
}

std::vector<double> el_force(const LagrangianTable& table) {
  const std::size_t nx = table.xs.size(), nv = table.vs.size();
  if (nx < 3 || nv < 3) throw GridError("el_force: need at least 3x3 nodes");
  const auto lv = grid_derivative(table.xs, table.vs, table.values, 1, 1);
  const auto lvv = grid_derivative(table.xs, table.vs, table.values, 1, 2);
  const auto lx = grid_derivative(table.xs, table.vs, table.values, 0, 1);
  const auto lxv = grid_derivative(table.xs, table.vs, lv, 0, 1);
  std::vector<double> f(table.values.size());
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < nv; ++j) {
      const std::size_t k = i * nv + j;
      f[k] = (lx[k] - table.vs[j] * lxv[k]) / lvv[k];
    }
  }
  return f;
}

double el_reproduction_residual(const LagrangianTable& table, const ForceSpec& F) {
  const auto f = el_force(table);
  const std::size_t nx = table.xs.size(), nv = table.vs.size();
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < nx; ++i) {
    for (std::size_t j = 1; j + 1 < nv; ++j) {
      const double target = F.evaluate(0.0, table.xs[i], table.vs[j]);
      worst = std::max(worst, std::abs(f[i * nv + j] - target) / (1.0 + std::abs(target)));
    }
  }
  return worst;
}

double quadrature_consistency(const LagrangianTable& table, const GField& G) {
  const std::size_t nx = table.xs.size(), nv = table.vs.size();
  const auto lvv = grid_derivative(table.xs, table.vs, table.values, 1, 2);
  double worst = 0.0;
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 1; j + 1 < nv; ++j) {
      const std::size_t k = i * nv + j;
      worst = std::max(worst, std::abs(lvv[k] - G.values[k]) / std::abs(G.values[k]));
    }
  }
  return worst;
}

void write_gfield_csv(std::ostream& os, const GField& G) {
  csv::header(os, {"x", "v", "G"});
  for (std::size_t i = 0; i < G.xs.size(); ++i) {
    for (std::size_t j = 0; j < G.vs.size(); ++j) csv::row(os, G.xs[i], G.vs[j], G.at(i, j));
  }
}

void write_lagrangian_csv(std::ostream& os, const LagrangianTable& table) {
  csv::header(os, {"x", "v", "L"});
  for (std::size_t i = 0; i < table.xs.size(); ++i) {
    for (std::size_t j = 0; j < table.vs.size(); ++j) {
      csv::row(os, table.xs[i], table.vs[j], table.at(i, j));
    }
  }
}

}  // namespace dissrel
