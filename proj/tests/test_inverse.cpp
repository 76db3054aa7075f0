#include <doctest.h>

#include <cmath>
#include <sstream>

#include "dissrel/errors.hpp"
#include "dissrel/inverse.hpp"
#include "dissrel/ode.hpp"

using namespace dissrel;

TEST_CASE("velocity-independent force gives G = 1") {
  const auto F = ForceSpec::harmonic(1.0);
  const auto G = inverse_G(F, linspace(0.0, 1.0, 21), linspace(0.1, 2.0, 96));
  for (double g : G.values) CHECK(std::abs(g - 1.0) <= 1e-10);
  const auto L = lagrangian_from_G(G, Gauge::force_matched(F));
  CHECK(el_reproduction_residual(L, F) < 1e-8);
}

TEST_CASE("linear drag: G against the characteristic solution") {
  // Characteristics dv/dx = -gamma with G v constant along them and G = 1 on
  // x = 0 give G = 1 + gamma x / v.
  const double gamma = 1.5;
  const auto F = ForceSpec::linear_drag(gamma);
  const auto xs = linspace(0.0, 1.0, 21), vs = linspace(0.1, 2.0, 381);
  const auto G = inverse_G(F, xs, vs);
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = 0; j < vs.size(); ++j) {
      const double ref = 1.0 + gamma * xs[i] / vs[j];
      worst = std::max(worst, std::abs(G.at(i, j) - ref) / ref);
    }
  }
  CHECK(worst < 1e-8);
  CHECK(gfield_pde_residual(G, F) < 1e-5);
  const auto L = lagrangian_from_G(G, Gauge::force_matched(F));
  CHECK(el_reproduction_residual(L, F) < 1e-4);
  CHECK(quadrature_consistency(L, G) < 1e-4);
}

TEST_CASE("analytic G = 1/v with f2 = gamma x reproduces drag") {
  const auto F = ForceSpec::linear_drag(1.0);
  const auto G = GField::analytic(linspace(0.0, 1.0, 21), linspace(0.1, 2.0, 381), [](double, double v) { return 1.0 / v; });
  const auto L = lagrangian_from_G(G, Gauge::linear(1.0));
  CHECK(el_reproduction_residual(L, F) < 1e-4);
}

TEST_CASE("gauge term f1(x) v leaves the Euler-Lagrange force unchanged") {
  const auto F = ForceSpec::linear_drag(1.0);
  const auto G = inverse_G(F, linspace(0.0, 1.0, 21), linspace(0.1, 2.0, 191));
  const auto L = lagrangian_from_G(G, Gauge::force_matched(F));
  const auto L2 = add_linear_gauge(L, [](double x) { return std::cos(3 * x) + x * x; }, "cos(3x)+x^2");
  const auto a = el_force(L), b = el_force(L2);
  const std::size_t nv = L.vs.size();
  for (std::size_t i = 1; i + 1 < L.xs.size(); ++i) {
    for (std::size_t j = 1; j + 1 < nv; ++j) CHECK(std::abs(a[i * nv + j] - b[i * nv + j]) < 1e-8);
  }
  CHECK(L2.f1_name == "cos(3x)+x^2");
}

TEST_CASE("relativistic drag") {
  SimParams p;
  p.gamma = 1.0;
  const auto F = ForceSpec::relativistic_drag(p, PotentialField::zero());
  const auto G = inverse_G(F, linspace(0.0, 1.0, 41), linspace(0.1, 0.9, 381));
  CHECK(gfield_pde_residual(G, F) < 1e-5);
  const auto L = lagrangian_from_G(G, Gauge::force_matched(F));
  CHECK(el_reproduction_residual(L, F) < 1e-4);
}

TEST_CASE("v = 0 inside the grid is a degeneracy for drag") {
  CHECK_THROWS_AS(inverse_G(ForceSpec::linear_drag(1.0), linspace(0.0, 1.0, 11), linspace(-1.0, 1.0, 21)),
                  DegeneracyError);
}

TEST_CASE("lagrangian_from_G needs a uniform velocity grid") {
  const auto G = GField::analytic(linspace(0.0, 1.0, 5), {0.1, 0.2, 0.4, 0.5, 0.9}, [](double, double) { return 1.0; });
  CHECK_THROWS_AS(lagrangian_from_G(G, Gauge::zero()), GridError);
}

TEST_CASE("quadrature is exact for G = 1") {
  // L = (v - v_a)^2 / 2 - f2
  const auto G = GField::analytic(linspace(0.0, 1.0, 5), linspace(0.5, 1.5, 11), [](double, double) { return 1.0; });
  const auto L = lagrangian_from_G(G, Gauge::quadratic(2.0));
  for (std::size_t i = 0; i < L.xs.size(); ++i) {
    for (std::size_t j = 0; j < L.vs.size(); ++j) {
      const double dv = L.vs[j] - 0.5;
      CHECK(L.at(i, j) == doctest::Approx(dv * dv / 2 - L.xs[i] * L.xs[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("CSV headers") {
  const auto G = GField::analytic(linspace(0.0, 1.0, 5), linspace(0.5, 1.5, 5), [](double, double) { return 1.0; });
  std::ostringstream a, b;
  write_gfield_csv(a, G);
  write_lagrangian_csv(b, lagrangian_from_G(G, Gauge::zero()));
  CHECK(a.str().rfind("x,v,G\n", 0) == 0);
  CHECK(b.str().rfind("x,v,L\n", 0) == 0);
}
