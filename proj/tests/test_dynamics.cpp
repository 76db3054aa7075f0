#include <doctest.h>

#include <cmath>
#include <sstream>

#include "dissrel/dynamics.hpp"
#include "dissrel/errors.hpp"

using namespace dissrel;

namespace {
SimParams params(double gamma, double c = 1.0) {
  SimParams p;
  p.gamma = gamma;
  p.c = c;
  return p;
}
}  // namespace

TEST_CASE("uniform motion without dissipation") {
  const auto tr = integrate_eom({0.0, 0.0, 0.6, 0.0}, params(0.0), PotentialField::zero(), 1.0, 1e-10);
  CHECK(std::abs(tr.back().x - 0.6) < 1e-12);
  CHECK(std::abs(tr.back().tau - 0.8) < 1e-12);
  CHECK(std::abs(tr.back().v - 0.6) < 1e-14);
}

TEST_CASE("canonical momentum is conserved under drag") {
  const auto p = params(1.0);
  const auto tr = integrate_eom({0.0, 0.0, 0.6, 0.0}, p, PotentialField::zero(), 10.0, 1e-10);
  const double p0 = canonical_momentum(tr.front(), p);
  CHECK(p0 == doctest::Approx(0.75));
  double drift = 0.0;
  for (const auto& s : tr.samples) drift = std::max(drift, std::abs(canonical_momentum(s, p) - p0) / p0);
  CHECK(drift < 1e-8);
  CHECK(tr.back().v < 1e-4);
}

TEST_CASE("relativistic energy is conserved in a harmonic well without drag") {
  // E = c^2 / sqrt(1 - v^2/c^2) + U
  const auto p = params(0.0);
  const auto U = PotentialField::harmonic(1.0);
  const auto tr = integrate_eom({0.0, 0.5, 0.3, 0.0}, p, U, 20.0, 1e-11);
  auto energy = [&](const State& s) { return lorentz_kinetic(s, p) + U.evaluate(s.t, s.x); };
  const double e0 = energy(tr.front());
  for (const auto& s : tr.samples) CHECK(std::abs(energy(s) - e0) < 1e-9);
}

TEST_CASE("tighter tolerance converges") {
  const auto p = params(1.0);
  const auto a = integrate_eom({0.0, 0.0, 0.9, 0.0}, p, PotentialField::linear(0.3), 5.0, 1e-8);
  const auto b = integrate_eom({0.0, 0.0, 0.9, 0.0}, p, PotentialField::linear(0.3), 5.0, 1e-12);
  CHECK(std::abs(a.back().x - b.back().x) < 1e-6);
}

TEST_CASE("preconditions") {
  CHECK_THROWS_AS(integrate_eom({0.0, 0.0, 1.0, 0.0}, params(1.0), PotentialField::zero(), 1.0, 1e-8), DomainError);
  CHECK_THROWS_AS(integrate_eom({0.0, 0.0, -1.5, 0.0}, params(1.0), PotentialField::zero(), 1.0, 1e-8), DomainError);
  CHECK_THROWS(integrate_eom({0.0, 0.0, 0.5, 0.0}, params(1.0), PotentialField::zero(), 1.0, 1e-2));
  CHECK_THROWS(integrate_eom({0.0, 0.0, 0.5, 0.0}, params(1.0), PotentialField::zero(), 1.0, 0.0));
  CHECK_THROWS_AS(integrate_eom({0.0, 0.0, 0.5, 0.0}, params(-1.0), PotentialField::zero(), 1.0, 1e-8), DomainError);
  CHECK_THROWS_AS(acceleration({0.0, 0.0, 1.0, 0.0}, params(1.0), PotentialField::zero()), DomainError);
}

TEST_CASE("acceleration formula") {
  const auto p = params(2.0);
  const auto U = PotentialField::linear(0.5);
  const State s{0.0, 0.1, 0.6, 0.0};
  // (-0.5 - 2 * 0.6) * 0.8^3
  CHECK(acceleration(s, p, U) == doctest::Approx(-1.7 * 0.512));
}

TEST_CASE("sampling grid holds the requested uniform times") {
  const auto tr = integrate_eom({0.0, 0.0, 0.6, 0.0}, params(1.0), PotentialField::zero(), 2.0, 1e-9, {5, false});
  REQUIRE(tr.size() == 5);
  CHECK(tr.samples[2].t == doctest::Approx(1.0));
}

TEST_CASE("trajectory CSV header and row count") {
  const auto tr = integrate_eom({0.0, 0.0, 0.6, 0.0}, params(1.0), PotentialField::zero(), 1.0, 1e-9, {11, false});
  std::ostringstream os;
  write_trajectory_csv(os, tr);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,x,v,tau,p,lorentz");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 11);
}
