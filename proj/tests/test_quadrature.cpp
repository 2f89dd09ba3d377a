#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "grpfem/quadrature.hpp"

#include <cmath>

using namespace grpfem;

namespace {

double quadrature_monomial(const QuadratureRule& rule, const int* exponents) {
  double sum = 0.0;
  for (int q = 0; q < rule.size(); ++q) {
    double term = rule.weights[static_cast<std::size_t>(q)];
    for (int d = 0; d < rule.dim; ++d) {
      term *= std::pow(rule.points[static_cast<std::size_t>(q)][d], exponents[d]);
    }
    sum += term;
  }
  return sum;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

TEST_CASE("degree-1 triangle rule is the centroid rule") {
  const QuadratureRule rule = make_quadrature(2, 1);
  REQUIRE(rule.size() == 1);
  CHECK(rule.points[0][0] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(rule.points[0][1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(rule.weights[0] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("degree-3 interval rule is two-point Gauss") {
  const QuadratureRule rule = make_quadrature(1, 3);
  REQUIRE(rule.size() == 2);
  const double lo = (3.0 - std::sqrt(3.0)) / 6.0;
  const double hi = (3.0 + std::sqrt(3.0)) / 6.0;
  CHECK(rule.points[0][0] == doctest::Approx(lo).epsilon(1e-14));
  CHECK(rule.points[1][0] == doctest::Approx(hi).epsilon(1e-14));
  CHECK(rule.weights[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(rule.weights[1] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("degree-2 tetrahedron rule has four symmetric points") {
  const QuadratureRule rule = make_quadrature(3, 2);
  REQUIRE(rule.size() == 4);
  double sum = 0.0;
  for (const double w : rule.weights) sum += w;
  CHECK(sum == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  int exps[3] = {2, 0, 0};
  CHECK(quadrature_monomial(rule, exps) ==
        doctest::Approx(simplex_monomial_integral(3, exps)).epsilon(1e-13));
  int mixed[3] = {1, 1, 0};
  CHECK(quadrature_monomial(rule, mixed) ==
        doctest::Approx(simplex_monomial_integral(3, mixed)).epsilon(1e-13));
}

TEST_CASE("weights are positive and sum to the simplex measure") {
  for (int dim = 1; dim <= 3; ++dim) {
    for (int degree = 0; degree <= 14; ++degree) {
      const QuadratureRule rule = make_quadrature(dim, degree);
      double sum = 0.0;
      for (const double w : rule.weights) {
        CHECK(w > 0.0);
        sum += w;
      }
      CHECK(sum == doctest::Approx(1.0 / factorial(dim)).epsilon(1e-14));
    }
  }
}

TEST_CASE("monomial exactness up to the requested degree") {
  for (int dim = 1; dim <= 3; ++dim) {
    for (int degree = 1; degree <= 12; ++degree) {
      const QuadratureRule rule = make_quadrature(dim, degree);
      int exps[3] = {0, 0, 0};
      auto check_all = [&](auto&& self, int d, int remaining) -> void {
        if (d == dim) {
          const double exact = simplex_monomial_integral(dim, exps);
          const double approx = quadrature_monomial(rule, exps);
          CHECK(std::abs(approx - exact) <= 1e-13 * std::max(1.0, std::abs(exact)));
          return;
        }
        for (int e = 0; e <= remaining; ++e) {
          exps[d] = e;
          self(self, d + 1, remaining - e);
        }
        exps[d] = 0;
      };
      check_all(check_all, 0, degree);
    }
  }
}

TEST_CASE("unsupported requests are rejected") {
  CHECK_THROWS_AS(make_quadrature(2, -1), std::invalid_argument);
  CHECK_THROWS_AS(make_quadrature(2, 31), std::invalid_argument);
  CHECK_THROWS_AS(make_quadrature(4, 2), std::invalid_argument);
}
