#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ferroflow/mms.hpp"
#include "ferroflow/quadrature.hpp"

using namespace ferroflow;

namespace {

constexpr double kH1 = 1e-5;  // first-derivative step
constexpr double kH2 = 1e-4;  // second-derivative step

Mat3 fd_grad(const VectorField& f, const Vec3& x, double t) {
  Mat3 G;
  for (int j = 0; j < 3; ++j)
    G.col(j) = (f(x + kH1 * Vec3::Unit(j), t) - f(x - kH1 * Vec3::Unit(j), t)) /
               (2.0 * kH1);
  return G;  // column j = d f / d x_j, i.e. G(i,j) = d f_i / d x_j
}

Vec3 fd_grad_scalar(const ScalarField& f, const Vec3& x, double t) {
  Vec3 g;
  for (int j = 0; j < 3; ++j)
    g(j) = (f(x + kH1 * Vec3::Unit(j), t) - f(x - kH1 * Vec3::Unit(j), t)) /
           (2.0 * kH1);
  return g;
}

Vec3 fd_curl(const VectorField& f, const Vec3& x, double t) {
  const Mat3 G = fd_grad(f, x, t);
  return Vec3(G(2, 1) - G(1, 2), G(0, 2) - G(2, 0), G(1, 0) - G(0, 1));
}

double fd_div(const VectorField& f, const Vec3& x, double t) {
  return fd_grad(f, x, t).trace();
}

Vec3 fd_lap(const VectorField& f, const Vec3& x, double t) {
  Vec3 lap = Vec3::Zero();
  for (int j = 0; j < 3; ++j)
    lap += (f(x + kH2 * Vec3::Unit(j), t) - 2.0 * f(x, t) +
            f(x - kH2 * Vec3::Unit(j), t)) /
           (kH2 * kH2);
  return lap;
}

Vec3 fd_dt(const VectorField& f, const Vec3& x, double t) {
  return (f(x, t + kH1) - f(x, t - kH1)) / (2.0 * kH1);
}

void check_close(const Vec3& a, const Vec3& b, double tol) {
  const double scale = std::max(1.0, std::max(a.norm(), b.norm()));
  CHECK((a - b).norm() <= tol * scale);
}

// model parameters of the convergence examples: all 1
ExactSolution forced(ExactSolution sol) {
  forcing_from_exact(sol, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0);
  return sol;
}

std::vector<std::pair<Vec3, double>> sample_points(int count, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> xs(0.1, 0.9), ts(0.2, 3.0);
  std::vector<std::pair<Vec3, double>> pts;
  for (int i = 0; i < count; ++i)
    pts.push_back({Vec3(xs(rng), xs(rng), xs(rng)), ts(rng)});
  return pts;
}

}  // namespace

TEST_CASE("hand-coded derivatives match finite differences (examples 1, 2)") {
  for (const ExactSolution& sol : {example1(), example2()}) {
    CAPTURE(sol.label);
    for (const auto& [x, t] : sample_points(12, 99)) {
      // velocity family
      const Mat3 Gu = fd_grad(sol.u, x, t);
      CHECK((sol.grad_u(x, t) - Gu).norm() <= 1e-5 * std::max(1.0, Gu.norm()));
      check_close(sol.curl_u(x, t), fd_curl(sol.u, x, t), 1e-5);
      check_close(sol.lap_u(x, t), fd_lap(sol.u, x, t), 1e-5);
      check_close(sol.du_dt(x, t), fd_dt(sol.u, x, t), 1e-5);
      // magnetization family
      const Mat3 Gm = fd_grad(sol.m, x, t);
      CHECK((sol.grad_m(x, t) - Gm).norm() <= 1e-5 * std::max(1.0, Gm.norm()));
      CHECK(sol.div_m(x, t) ==
            doctest::Approx(fd_div(sol.m, x, t)).epsilon(1e-5).scale(1.0));
      check_close(sol.curl_m(x, t), fd_curl(sol.m, x, t), 1e-5);
      check_close(sol.lap_m(x, t), fd_lap(sol.m, x, t), 1e-5);
      check_close(sol.dm_dt(x, t), fd_dt(sol.m, x, t), 1e-5);
      // applied field and pressure
      const Mat3 GH = fd_grad(sol.H, x, t);
      CHECK((sol.grad_H(x, t) - GH).norm() <= 1e-5 * std::max(1.0, GH.norm()));
      CHECK(sol.div_H(x, t) ==
            doctest::Approx(fd_div(sol.H, x, t)).epsilon(1e-5).scale(1.0));
      check_close(sol.grad_ptilde(x, t),
                  fd_grad_scalar(sol.ptilde, x, t), 1e-5);
    }
  }
}

TEST_CASE("H is curl-free") {
  for (const ExactSolution& sol : {example1(), example2()}) {
    for (const auto& [x, t] : sample_points(10, 4)) {
      CHECK(fd_curl(sol.H, x, t).norm() <= 1e-6);
      // symmetric Jacobian is the analytic statement of curl H = 0
      const Mat3 G = sol.grad_H(x, t);
      CHECK((G - G.transpose()).norm() <= 1e-13 * std::max(1.0, G.norm()));
    }
  }
}

TEST_CASE("m.n and H.n vanish at 100 boundary points") {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> pos(0.0, 1.0), ts(0.2, 3.0);
  for (const ExactSolution& sol : {example1(), example2()}) {
    for (int i = 0; i < 100; ++i) {
      const int axis = i % 3;
      Vec3 x(pos(rng), pos(rng), pos(rng));
      x[axis] = (i / 3) % 2;  // on the face x_axis = 0 or 1
      const double t = ts(rng);
      CHECK(std::abs(sol.m(x, t)[axis]) <= 1e-12);
      CHECK(std::abs(sol.H(x, t)[axis]) <= 1e-12);
    }
  }
}

TEST_CASE("ptilde has zero mean over the unit cube") {
  // per-axis polynomial degree <= 3: a 5-point tensor Gauss rule is exact
  const LineQuadratureRule rule = line_rule(9);
  const ExactSolution sol = example1();
  double mean = 0.0;
  for (int i = 0; i < rule.weights.size(); ++i)
    for (int j = 0; j < rule.weights.size(); ++j)
      for (int k = 0; k < rule.weights.size(); ++k)
        mean += rule.weights(i) * rule.weights(j) * rule.weights(k) *
                sol.ptilde(Vec3(rule.points(i), rule.points(j),
                                rule.points(k)),
                           0.7);
  CHECK(std::abs(mean) <= 1e-12);
}

TEST_CASE("example 1 velocity norm: ||u(pi/2)||^2 = 3/2") {
  const LineQuadratureRule rule = line_rule(15);
  const ExactSolution sol = example1();
  const double t = 1.5707963267948966;
  double norm2 = 0.0;
  for (int i = 0; i < rule.weights.size(); ++i)
    for (int j = 0; j < rule.weights.size(); ++j)
      for (int k = 0; k < rule.weights.size(); ++k)
        norm2 += rule.weights(i) * rule.weights(j) * rule.weights(k) *
                 sol.u(Vec3(rule.points(i), rule.points(j), rule.points(k)), t)
                     .squaredNorm();
  CHECK(norm2 == doctest::Approx(1.5).epsilon(1e-10));
}

TEST_CASE("vector identity: -lap m = curl curl m - grad div m") {
  for (const ExactSolution& sol : {example1(), example2()}) {
    for (const auto& [x, t] : sample_points(10, 21)) {
      const Vec3 curl_curl = fd_curl(sol.curl_m, x, t);
      const Vec3 grad_div = fd_grad_scalar(sol.div_m, x, t);
      check_close(-sol.lap_m(x, t), curl_curl - grad_div, 1e-5);
    }
  }
}

TEST_CASE("momentum forcing matches a finite-difference strong-form oracle") {
  for (const ExactSolution& base : {example1(), example2()}) {
    const ExactSolution sol = forced(base);
    const auto mxH = [&](const Vec3& x, double t) {
      return Vec3(sol.m(x, t).cross(sol.H(x, t)));
    };
    for (const auto& [x, t] : sample_points(20, 55)) {
      const Vec3 u = sol.u(x, t), m = sol.m(x, t);
      // p = ptilde - |u|^2/2 - (m.H)/2, differentiated by finite differences
      const ScalarField p = [&](const Vec3& y, double s) {
        return sol.ptilde(y, s) - 0.5 * sol.u(y, s).squaredNorm() -
               0.5 * sol.m(y, s).dot(sol.H(y, s));
      };
      const Vec3 oracle = fd_dt(sol.u, x, t) + fd_grad(sol.u, x, t) * u -
                          fd_lap(sol.u, x, t) + fd_grad_scalar(p, x, t) -
                          fd_grad(sol.H, x, t) * m - 0.5 * fd_curl(mxH, x, t);
      check_close(sol.f_u(x, t), oracle, 1e-5);
    }
  }
}

TEST_CASE("magnetization forcing matches a finite-difference oracle") {
  for (const ExactSolution& base : {example1(), example2()}) {
    const ExactSolution sol = forced(base);
    for (const auto& [x, t] : sample_points(20, 56)) {
      const Vec3 u = sol.u(x, t), m = sol.m(x, t), H = sol.H(x, t);
      const Vec3 oracle = fd_dt(sol.m, x, t) + fd_grad(sol.m, x, t) * u -
                          fd_lap(sol.m, x, t) -
                          0.5 * fd_curl(sol.u, x, t).cross(m) + (m - H) +
                          m.cross(m.cross(H));
      check_close(sol.f_m(x, t), oracle, 1e-5);
    }
  }
}

TEST_CASE("derived fields: z = u x m, k = curl m, divHe = -div(H+m)") {
  const ExactSolution sol = forced(example1());
  for (const auto& [x, t] : sample_points(10, 77)) {
    check_close(sol.z(x, t), sol.u(x, t).cross(sol.m(x, t)), 1e-14);
    check_close(sol.k(x, t), fd_curl(sol.m, x, t), 1e-5);
    CHECK(sol.divHe(x, t) ==
          doctest::Approx(-(sol.div_H(x, t) + sol.div_m(x, t)))
              .epsilon(1e-13));
    check_close(sol.g_u(x, t), sol.u(x, t), 1e-14);
  }
  // where cos(pi x) = 0 the magnetization is divergence-free and the
  // source reduces to -div H
  std::mt19937 rng(6);
  std::uniform_real_distribution<double> pos(0.1, 0.9);
  for (int i = 0; i < 10; ++i) {
    const Vec3 x(0.5, pos(rng), pos(rng));
    CHECK(sol.divHe(x, 1.0) ==
          doctest::Approx(-sol.div_H(x, 1.0)).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("example 3 is the homogeneous decay setup") {
  const ExactSolution sol = example3();
  CHECK(sol.homogeneous);
  CHECK(sol.T == 1.0);
  for (const auto& [x, t] : sample_points(5, 1)) {
    CHECK(sol.H(x, t).norm() == 0.0);
    CHECK(sol.divHe(x, t) == 0.0);
    CHECK(sol.f_u(x, t).norm() == 0.0);
    CHECK(sol.f_m(x, t).norm() == 0.0);
    CHECK(sol.g_u(x, t).norm() == 0.0);
  }
  // m0 has zero normal trace so the initial face interpolant is admissible
  CHECK(std::abs(sol.m(Vec3(0.0, 0.3, 0.7), 0.0).x()) <= 1e-15);
  CHECK(std::abs(sol.m(Vec3(1.0, 0.3, 0.7), 0.0).x()) <= 1e-15);
}

TEST_CASE("final times match the experiment settings") {
  CHECK(example1().T == 4.0);
  CHECK(example2().T == 1.0);
}
