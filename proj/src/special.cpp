#include "dissrel/special.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "dissrel/errors.hpp"
#include "dissrel/ode.hpp"

namespace dissrel {

namespace {

using cplx = std::complex<double>;
using quad = boost::multiprecision::cpp_bin_float_quad;

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

constexpr int kMaxTerms = 500;
constexpr double kSeriesLimit = 30.0;

bool is_nonpositive_integer(cplx z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

struct SeriesSums {
  cplx s;  // sum a_m
  cplx t;  // sum m a_m
};

// a_0 = 1, a_m = a_{m-1} (-z^2/4) / (m (m + mu)); the alternating sum loses
// about z / ln(10) digits to cancellation, hence the quad precision.
SeriesSums bessel_series(cplx mu, double z) {
  const quad mr = mu.real(), mi = mu.imag();
  const quad w = -quad(z) * quad(z) / 4;
  quad ar = 1, ai = 0;
  quad sr = 1, si = 0, tr = 0, ti = 0;
  const quad tol = quad(1e-19);
  for (int m = 1; m <= kMaxTerms; ++m) {
    // divide by m (m + mu)
    const quad dr = m + mr, di = mi;
    const quad den = (dr * dr + di * di) * m;
    const quad nr = (ar * dr + ai * di) * w / den;
    const quad ni = (ai * dr - ar * di) * w / den;
    ar = nr;
    ai = ni;
    sr += ar;
    si += ai;
    tr += ar * m;
    ti += ai * m;
    if (m > z / 2 + 1) {
      const quad amag = abs(ar) + abs(ai);
      const quad smag = abs(sr) + abs(si);
      if (amag <= tol * smag) {
        return {cplx(static_cast<double>(sr), static_cast<double>(si)),
                cplx(static_cast<double>(tr), static_cast<double>(ti))};
      }
    }
  }
  std::ostringstream msg;
  msg << "bessel_j: series did not converge in " << kMaxTerms << " terms at z = " << z;
  throw NonConvergence(msg.str());
}

BesselValue bessel_j_series(cplx mu, double z) {
  const auto sums = bessel_series(mu, z);
  const cplx pref = std::exp(mu * std::log(z / 2.0)) / complex_gamma(1.0 + mu);
  return {pref * sums.s, pref * (mu * sums.s + 2.0 * sums.t) / z};
}

// u = sqrt(z) J solves u'' + (1 - (mu^2 - 1/4) / z^2) u = 0.
BesselValue bessel_j_continued(cplx mu, double z) {
  const auto start = bessel_j_series(mu, kSeriesLimit);
  const double r0 = std::sqrt(kSeriesLimit);
  const cplx u0 = r0 * start.value;
  const cplx up0 = start.value / (2.0 * r0) + r0 * start.derivative;
  const cplx shift = mu * mu - 0.25;
  OdeOptions opt;
  opt.rtol = 1e-13;
  opt.atol = 1e-15;
  DormandPrince dp(
      [shift](double s, std::span<const double> y, std::span<double> dy) {
        const cplx u(y[0], y[1]);
        const cplx a = -(1.0 - shift / (s * s)) * u;
        dy[0] = y[2];
        dy[1] = y[3];
        dy[2] = a.real();
        dy[3] = a.imag();
      },
      4, opt);
  std::array<double, 4> y = {u0.real(), u0.imag(), up0.real(), up0.imag()};
  dp.integrate(kSeriesLimit, y, z);
  const double r = std::sqrt(z);
  const cplx u(y[0], y[1]), up(y[2], y[3]);
  return {u / r, (up - u / (2.0 * z)) / r};
}

}  // namespace

cplx complex_gamma(cplx z) {
  if (is_nonpositive_integer(z)) {
    std::ostringstream msg;
    msg << "complex_gamma: pole at z = " << z.real();
    throw PoleError(msg.str());
  }
  constexpr double pi = std::numbers::pi;
  if (z.real() < 0.5) {
    return pi / (std::sin(pi * z) * complex_gamma(1.0 - z));
  }
  z -= 1.0;
  cplx x = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) x += kLanczos[i] / (z + static_cast<double>(i));
  const cplx t = z + kLanczosG + 0.5;
  return std::sqrt(2.0 * pi) * std::exp((z + 0.5) * std::log(t) - t) * x;
}

BesselValue bessel_j(cplx mu, double z) {
  if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("bessel_j: z > 0 violated");
  if (is_nonpositive_integer(mu) && mu.real() != 0.0) {
    // J_{-n} = (-1)^n J_n
    const auto n = static_cast<long>(-mu.real());
    auto b = bessel_j(cplx(static_cast<double>(n), 0.0), z);
    if (n % 2 != 0) b = {-b.value, -b.derivative};
    return b;
  }
  return z <= kSeriesLimit ? bessel_j_series(mu, z) : bessel_j_continued(mu, z);
}

ImaginaryOrderBessel bessel_imaginary_order(double nu, double z) {
  if (!(nu > 0.0)) throw DomainError("bessel_imaginary_order: nu > 0 violated");
  ImaginaryOrderBessel out;
  out.j_plus = bessel_j(cplx(0.0, nu), z);
  out.j_minus = bessel_j(cplx(0.0, -nu), z);
  const double pi = std::numbers::pi;
  const double ch = std::cosh(nu * pi);
  const cplx den(0.0, std::sinh(nu * pi));
  out.y.value = (out.j_plus.value * ch - out.j_minus.value) / den;
  out.y.derivative = (out.j_plus.derivative * ch - out.j_minus.derivative) / den;
  return out;
}

}  // namespace dissrel
