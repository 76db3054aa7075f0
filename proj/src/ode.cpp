#include "dissrel/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dissrel/errors.hpp"

namespace dissrel {

namespace {

constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

// PI controller constants.
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - kBeta * 0.75;
constexpr double kSafe = 0.9;
constexpr double kFacMin = 0.2;   // largest shrink 1/5
constexpr double kFacMax = 10.0;  // largest growth

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double a) { return std::isfinite(a); });
}

}  // namespace

void StepView::interpolate(double t, std::span<double> out) const {
  const double theta = (t - t_old_) / h_;
  const double theta1 = 1.0 - theta;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = r1_[i] + theta * (r2_[i] + theta1 * (r3_[i] + theta * (r4_[i] + theta1 * r5_[i])));
  }
}

DormandPrince::DormandPrince(OdeRhs rhs, std::size_t dim, OdeOptions options)
    : rhs_(std::move(rhs)), dim_(dim), opt_(std::move(options)) {
  if (!(opt_.rtol > 0.0) || opt_.atol < 0.0) {
    throw std::invalid_argument("DormandPrince: tolerances must be positive");
  }
}

double DormandPrince::error_norm(std::span<const double> y, std::span<const double> y_new,
                                 std::span<const double> err) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    const double sc = opt_.atol + opt_.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
    const double r = sc > 0.0 ? err[i] / sc : (err[i] == 0.0 ? 0.0 : INFINITY);
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(dim_));
}

double DormandPrince::initial_step(double t0, std::span<const double> y,
                                   std::span<const double> f0, double span) const {
  if (opt_.h_init > 0.0) return std::min(opt_.h_init, span);
  // Hairer-Norsett-Wanner starting step heuristic.
  double dnf = 0.0, dny = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    const double sk = opt_.atol + opt_.rtol * std::abs(y[i]);
    const double a = sk > 0.0 ? f0[i] / sk : 0.0;
    const double b = sk > 0.0 ? y[i] / sk : 0.0;
    dnf += a * a;
    dny += b * b;
  }
  double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
  h = std::min(h, span);
  std::vector<double> y1(dim_), f1(dim_);
  for (std::size_t i = 0; i < dim_; ++i) y1[i] = y[i] + h * f0[i];
  rhs_(t0 + h, y1, f1);
  double der2 = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    const double sk = opt_.atol + opt_.rtol * std::abs(y[i]);
    const double a = sk > 0.0 ? (f1[i] - f0[i]) / sk : 0.0;
    der2 += a * a;
  }
  der2 = std::isfinite(der2) ? std::sqrt(der2) / h : 0.0;
  const double der12 = std::max(der2, std::sqrt(dnf));
  const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 0.2);
  h = std::min({100.0 * h, h1, span});
  if (opt_.h_max > 0.0) h = std::min(h, opt_.h_max);
  return h;
}

OdeStats DormandPrince::integrate(double t0, std::span<double> y, double t1,
                                  const std::function<void(const StepView&)>& on_step) {
  if (!(t1 > t0)) throw std::invalid_argument("DormandPrince: t1 must exceed t0");
  if (y.size() != dim_) throw std::invalid_argument("DormandPrince: state dimension mismatch");

  const std::size_t n = dim_;
  const double span = t1 - t0;
  const double h_min = opt_.h_min_rel * std::max(span, std::abs(t0));

  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), err(n);
  std::vector<double> r1(n), r2(n), r3(n), r4(n), r5(n);

  OdeStats st;
  rhs_(t0, y, k1);
  ++st.rhs_evals;
  if (!all_finite(k1)) throw DomainError("DormandPrince: non-finite derivative at initial state");

  double t = t0;
  double h = initial_step(t0, y, k1, span);
  ++st.rhs_evals;
  double facold = 1e-4;
  bool last_rejected = false;

  while (t < t1) {
    if (st.accepted + st.rejected >= opt_.max_steps) {
      throw StepFailure("DormandPrince: maximum number of steps exceeded");
    }
    if (opt_.h_max > 0.0) h = std::min(h, opt_.h_max);
    bool final_step = false;
    if (t + h >= t1 || t + 1.01 * h >= t1) {
      h = t1 - t;
      final_step = true;
    }
    if (h < h_min) {
      std::ostringstream msg;
      msg << "DormandPrince: step size " << h << " fell below minimum " << h_min << " at t=" << t;
      throw StepFailure(msg.str());
    }

    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    rhs_(t + c2 * h, ytmp, k2);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs_(t + c3 * h, ytmp, k3);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs_(t + c4 * h, ytmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs_(t + c5 * h, ytmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    const double t_new = final_step ? t1 : t + h;
    rhs_(t_new, ytmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    rhs_(t_new, ynew, k7);
    st.rhs_evals += 6;

    for (std::size_t i = 0; i < n; ++i) {
      err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    }

    const bool finite = all_finite(ynew) && all_finite(k7) && all_finite(err);
    const bool guarded = finite && opt_.guard && opt_.guard(t_new, ynew);
    if (!finite || guarded) {
      if (guarded) ++st.guard_rejections;
      ++st.rejected;
      h *= 0.5;
      last_rejected = true;
      continue;
    }

    const double e = error_norm(y, ynew, err);
    const double fac11 = std::pow(e, kExpo);
    if (e <= 1.0) {
      double fac = fac11 / std::pow(facold, kBeta);
      fac = std::clamp(fac / kSafe, 1.0 / kFacMax, 1.0 / kFacMin);
      double h_next = h / fac;
      facold = std::max(e, 1e-4);
      ++st.accepted;
      st.max_error_ratio = std::max(st.max_error_ratio, e);

      for (std::size_t i = 0; i < n; ++i) {
        const double ydiff = ynew[i] - y[i];
        const double bspl = h * k1[i] - ydiff;
        r1[i] = y[i];
        r2[i] = ydiff;
        r3[i] = bspl;
        r4[i] = ydiff - h * k7[i] - bspl;
        r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      }
      std::copy(ynew.begin(), ynew.end(), y.begin());
      std::swap(k1, k7);

      if (on_step) {
        StepView view;
        view.t_old_ = t;
        view.h_ = h;
        view.y_new_ = std::span<const double>(y.data(), n);
        view.r1_ = r1;
        view.r2_ = r2;
        view.r3_ = r3;
        view.r4_ = r4;
        view.r5_ = r5;
        on_step(view);
      }

      t = t_new;
      if (last_rejected) h_next = std::min(h_next, h);
      last_rejected = false;
      h = h_next;
    } else {
      ++st.rejected;
      h /= std::min(1.0 / kFacMin, fac11 / kSafe);
      last_rejected = true;
    }
  }
  return st;
}

SampledSolution solve_sampled(const OdeRhs& rhs, std::span<const double> y0, double t0, double t1,
                              std::span<const double> outputs, const OdeOptions& options,
                              bool include_steps) {
  SampledSolution sol;
  sol.dim = y0.size();
  std::vector<double> y(y0.begin(), y0.end());

  auto push = [&](double t, std::span<const double> state) {
    if (!sol.t.empty() && !(t > sol.t.back())) return;
    sol.t.push_back(t);
    sol.y.insert(sol.y.end(), state.begin(), state.end());
  };
  push(t0, y);

  std::size_t next = 0;
  while (next < outputs.size() && outputs[next] <= t0) ++next;
  std::vector<double> buf(sol.dim);

  DormandPrince dp(rhs, sol.dim, options);
  sol.stats = dp.integrate(t0, y, t1, [&](const StepView& step) {
    // Requested outputs within the step (a hair of slack avoids near-duplicates
    // of step endpoints being emitted twice).
    const double tn = step.t_new();
    const double slack = 1e-14 * std::max(1.0, std::abs(tn));
    while (next < outputs.size() && outputs[next] < tn - slack) {
      step.interpolate(outputs[next], buf);
      push(outputs[next], buf);
      ++next;
    }
    const bool is_output = next < outputs.size() && std::abs(outputs[next] - tn) <= slack;
    const double t_rec = is_output ? outputs[next] : tn;
    if (is_output) ++next;
    if (include_steps || is_output || tn == t1) push(t_rec, step.y_new());
  });
  return sol;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = a;
    return out;
  }
  const double h = (b - a) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = a + h * static_cast<double>(i);
  out.back() = b;
  return out;
}

}  // namespace dissrel
