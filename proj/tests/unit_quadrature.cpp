#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ferroflow/quadrature.hpp"

using namespace ferroflow;

namespace {

// exact reference-tetrahedron monomial integral: a!b!c!/(a+b+c+3)!
double tet_monomial(int a, int b, int c) {
  auto fact = [](int k) {
    double r = 1.0;
    for (int i = 2; i <= k; ++i) r *= i;
    return r;
  };
  return fact(a) * fact(b) * fact(c) / fact(a + b + c + 3);
}

double tri_monomial(int a, int b) {
  auto fact = [](int k) {
    double r = 1.0;
    for (int i = 2; i <= k; ++i) r *= i;
    return r;
  };
  return fact(a) * fact(b) / fact(a + b + 2);
}

}  // namespace

TEST_CASE("tet rules integrate all monomials up to their degree") {
  for (int degree : {1, 2, 3, 4, 5, 6, 8, 10}) {
    const QuadratureRule rule = tet_rule(degree);
    CHECK(rule.degree >= degree);
    CHECK(rule.weights.sum() == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    for (int a = 0; a <= degree; ++a)
      for (int b = 0; a + b <= degree; ++b)
        for (int c = 0; a + b + c <= degree; ++c) {
          double integral = 0.0;
          for (int q = 0; q < rule.size(); ++q) {
            const auto p = rule.points.col(q);
            integral += rule.weights(q) * std::pow(p.x(), a) *
                        std::pow(p.y(), b) * std::pow(p.z(), c);
          }
          CHECK(integral ==
                doctest::Approx(tet_monomial(a, b, c)).epsilon(1e-12));
        }
  }
}

TEST_CASE("tet points lie inside the reference tetrahedron") {
  const QuadratureRule rule = tet_rule(6);
  for (int q = 0; q < rule.size(); ++q) {
    const auto p = rule.points.col(q);
    CHECK(p.minCoeff() >= 0.0);
    CHECK(p.sum() <= 1.0 + 1e-14);
    CHECK(rule.weights(q) > 0.0);
  }
}

TEST_CASE("triangle rules integrate monomials and sum to 1/2") {
  for (int degree : {1, 2, 4, 6}) {
    const TriQuadratureRule rule = tri_rule(degree);
    CHECK(rule.weights.sum() == doctest::Approx(0.5).epsilon(1e-14));
    for (int a = 0; a <= degree; ++a)
      for (int b = 0; a + b <= degree; ++b) {
        double integral = 0.0;
        for (int q = 0; q < rule.weights.size(); ++q)
          integral += rule.weights(q) * std::pow(rule.points(0, q), a) *
                      std::pow(rule.points(1, q), b);
        CHECK(integral == doctest::Approx(tri_monomial(a, b)).epsilon(1e-12));
      }
  }
}

TEST_CASE("line rules integrate monomials on [0,1]") {
  for (int degree : {1, 3, 5, 9}) {
    const LineQuadratureRule rule = line_rule(degree);
    CHECK(rule.weights.sum() == doctest::Approx(1.0).epsilon(1e-14));
    for (int k = 0; k <= degree; ++k) {
      double integral = 0.0;
      for (int q = 0; q < rule.weights.size(); ++q)
        integral += rule.weights(q) * std::pow(rule.points(q), k);
      CHECK(integral == doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
    }
  }
}

TEST_CASE("rules are deterministic") {
  const QuadratureRule a = tet_rule(5), b = tet_rule(5);
  CHECK((a.points - b.points).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.weights - b.weights).cwiseAbs().maxCoeff() == 0.0);
}
