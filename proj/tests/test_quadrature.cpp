#include "hyperls/quadrature.hpp"

#include <doctest.h>

#include <cmath>

using namespace hyperls;

namespace {

// Exact barycentric monomial integral over the reference triangle:
// int l0^a l1^b l2^c = a! b! c! / (a+b+c+2)!  (area 1/2 included).
double bary_monomial_exact(int a, int b, int c) {
  auto fact = [](int n) {
    double f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  return fact(a) * fact(b) * fact(c) / fact(a + b + c + 2);
}

double integrate_monomial(const QuadratureRule& rule, int a, int b, int c) {
  double sum = 0;
  for (int q = 0; q < rule.size(); ++q)
    sum += rule.weights[q] * std::pow(rule.bary(q, 0), a) * std::pow(rule.bary(q, 1), b) *
           std::pow(rule.bary(q, 2), c);
  return sum;
}

}  // namespace

TEST_CASE("triangle rules: weights and basic integrals") {
  for (int deg : {1, 2, 3, 4, 5, 6, 7, 8}) {
    const auto rule = quadrature_rule(deg);
    CHECK(rule.degree >= deg);
    CHECK(rule.weights.minCoeff() > 0);
    CHECK(rule.weights.sum() == doctest::Approx(0.5).epsilon(1e-14));
  }
  const auto r1 = quadrature_rule(1);
  CHECK(integrate_monomial(r1, 0, 0, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(integrate_monomial(r1, 1, 0, 0) == doctest::Approx(1.0 / 6).epsilon(1e-14));
}

TEST_CASE("triangle rules: exact through stated degree") {
  for (int deg : {1, 2, 4, 5, 6, 8}) {
    const auto rule = quadrature_rule(deg);
    for (int a = 0; a <= rule.degree; ++a)
      for (int b = 0; a + b <= rule.degree; ++b) {
        const int c = 0;
        const double exact = bary_monomial_exact(a, b, c);
        CHECK_MESSAGE(std::abs(integrate_monomial(rule, a, b, c) - exact) <= 1e-13,
                      "deg ", deg, " monomial ", a, " ", b);
      }
    // a full three-index spot check once the rule covers degree 3
    if (rule.degree >= 3)
      CHECK(std::abs(integrate_monomial(rule, 1, 1, 1) - bary_monomial_exact(1, 1, 1)) <=
            1e-13);
  }
  CHECK(integrate_monomial(quadrature_rule(4), 2, 2, 0) ==
        doctest::Approx(bary_monomial_exact(2, 2, 0)).epsilon(1e-13));
  CHECK_THROWS(quadrature_rule(9));
}

TEST_CASE("edge rules") {
  for (int deg = 1; deg <= 9; ++deg) {
    const auto rule = edge_rule(deg);
    CHECK(rule.degree >= deg);
    CHECK(rule.weights.sum() == doctest::Approx(1.0).epsilon(1e-14));
    for (int p = 0; p <= rule.degree; ++p) {
      double sum = 0;
      for (int q = 0; q < rule.points.size(); ++q)
        sum += rule.weights[q] * std::pow(rule.points[q], p);
      CHECK(sum == doctest::Approx(1.0 / (p + 1)).epsilon(1e-13));
    }
  }
  CHECK_THROWS(edge_rule(10));
}
