#include "doctest.h"

#include <cmath>
#include <numbers>

#include "clonometry/quadrature.hpp"

using namespace clonometry;

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
  Quadrature1D rule = gauss_legendre(64);
  CHECK(rule.weights.sum() == doctest::Approx(2.0).epsilon(1e-14));

  double x2 = 0.0, x10 = 0.0, odd = 0.0;
  for (int k = 0; k < rule.nodes.size(); ++k) {
    const double x = rule.nodes(k), w = rule.weights(k);
    x2 += w * x * x;
    x10 += w * std::pow(x, 10);
    odd += w * std::pow(x, 7);
  }
  CHECK(x2 == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(x10 == doctest::Approx(2.0 / 11.0).epsilon(1e-13));
  CHECK(std::abs(odd) < 1e-14);
}

TEST_CASE("Gauss-Legendre handles high-degree integrands near exactness") {
  // degree 2n-1 rule: n = 5 integrates x^8 exactly, not x^10
  Quadrature1D rule = gauss_legendre(5);
  double x8 = 0.0;
  for (int k = 0; k < 5; ++k) x8 += rule.weights(k) * std::pow(rule.nodes(k), 8);
  CHECK(x8 == doctest::Approx(2.0 / 9.0).epsilon(1e-13));
}

TEST_CASE("Gauss-Hermite reproduces Gaussian moments") {
  Quadrature1D rule = gauss_hermite(41);
  const double rt_pi = std::sqrt(std::numbers::pi);
  CHECK(rule.weights.sum() == doctest::Approx(rt_pi).epsilon(1e-14));

  double x2 = 0.0, x4 = 0.0, cosine = 0.0;
  for (int k = 0; k < rule.nodes.size(); ++k) {
    const double x = rule.nodes(k), w = rule.weights(k);
    x2 += w * x * x;
    x4 += w * x * x * x * x;
    cosine += w * std::cos(2.0 * x);
  }
  CHECK(x2 == doctest::Approx(rt_pi / 2.0).epsilon(1e-14));
  CHECK(x4 == doctest::Approx(3.0 * rt_pi / 4.0).epsilon(1e-13));
  // int e^{-x^2} cos(2x) dx = sqrt(pi) e^{-1}
  CHECK(cosine == doctest::Approx(rt_pi * std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("uniform grid is symmetric and completeness-graded correctly") {
  QuadratureGrid grid = uniform_grid(9.5, 0.05);
  CHECK(grid.points.size() == 381);
  CHECK(grid.points(0) == doctest::Approx(-9.5));
  CHECK(grid.points(grid.points.size() - 1) == doctest::Approx(9.5));
  CHECK(grid.points(190) == doctest::Approx(0.0));
  CHECK(completeness_grade(grid, 40));
  CHECK(!completeness_grade(grid, 41));
  CHECK(!completeness_grade(uniform_grid(9.5, 0.1), 40));
}
