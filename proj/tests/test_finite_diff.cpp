#include <doctest.h>

#include <cmath>
#include <vector>

#include "dissrel/finite_diff.hpp"
#include "dissrel/ode.hpp"

using namespace dissrel;

TEST_CASE("central weights") {
  const std::vector<double> xs = {-1.0, 0.0, 1.0};
  const auto w1 = fd_weights(0.0, xs, 1);
  CHECK(w1[0] == doctest::Approx(-0.5));
  CHECK(w1[1] == doctest::Approx(0.0));
  CHECK(w1[2] == doctest::Approx(0.5));
  const auto w2 = fd_weights(0.0, xs, 2);
  CHECK(w2[0] == doctest::Approx(1.0));
  CHECK(w2[1] == doctest::Approx(-2.0));
  CHECK(w2[2] == doctest::Approx(1.0));
}

TEST_CASE("five-point stencils differentiate quartics exactly, also near the ends") {
  std::vector<double> xs = {0.0, 0.1, 0.25, 0.3, 0.5, 0.7, 0.75, 1.0};
  std::vector<double> ys;
  for (double x : xs) ys.push_back(x * x * x * x - 2 * x + 1);
  const auto d = fd_derivative(xs, ys, 1, 5);
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(d[i] == doctest::Approx(4 * std::pow(xs[i], 3) - 2).epsilon(1e-10));
}

TEST_CASE("constant data has zero derivative exactly") {
  const auto xs = linspace(0.0, 1.0, 9);
  const std::vector<double> ys(9, 3.14159);
  for (double d : fd_derivative(xs, ys, 1, 5)) CHECK(d == 0.0);
  for (double d : fd_derivative(xs, ys, 2, 7)) CHECK(d == 0.0);
}

TEST_CASE("central_diff and is_uniform") {
  const double h = fd_step(1.0);
  CHECK(central_diff([](double x) { return std::sin(x); }, 0.3, h) == doctest::Approx(std::cos(0.3)).epsilon(1e-9));
  CHECK(is_uniform(linspace(0.0, 1.0, 11)));
  CHECK_FALSE(is_uniform(std::vector<double>{0.0, 0.1, 0.3}));
}
