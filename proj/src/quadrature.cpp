#include "ferroflow/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace ferroflow {

namespace {

// Gauss-Jacobi rule with weight (1-t)^alpha on [0,1], n points, exact for
// degree 2n-1. Golub-Welsch on the monic Jacobi recurrence (beta = 0).
void gauss_jacobi01(int n, int alpha, Eigen::VectorXd& t, Eigen::VectorXd& w) {
  const double a = alpha, b = 0.0;
  Eigen::VectorXd diag(n), sub(n > 1 ? n - 1 : 0);
  auto tgamma_i = [](double x) { return std::tgamma(x); };
  const double mu0 = std::pow(2.0, a + b + 1.0) * tgamma_i(a + 1.0) *
                     tgamma_i(b + 1.0) / tgamma_i(a + b + 2.0);
  for (int k = 0; k < n; ++k) {
    const double den = (2.0 * k + a + b) * (2.0 * k + a + b + 2.0);
    diag(k) = (k == 0 && a + b == 0.0) ? 0.0 : (b * b - a * a) / den;
  }
  for (int k = 1; k < n; ++k) {
    const double num = 4.0 * k * (k + a) * (k + b) * (k + a + b);
    const double den = std::pow(2.0 * k + a + b, 2.0) *
                       (2.0 * k + a + b + 1.0) * (2.0 * k + a + b - 1.0);
    sub(k - 1) = std::sqrt(num / den);
  }
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  J.diagonal() = diag;
  if (n > 1) {
    J.diagonal(1) = sub;
    J.diagonal(-1) = sub;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  t.resize(n);
  w.resize(n);
  for (int k = 0; k < n; ++k) {
    const double x = es.eigenvalues()(k);              // node on [-1,1]
    t(k) = 0.5 * (x + 1.0);                            // map to [0,1]
    const double wk = mu0 * std::pow(es.eigenvectors()(0, k), 2.0);
    w(k) = wk / std::pow(2.0, a + 1.0);                // absorb (1-t)^a scaling
  }
}

}  // namespace

LineQuadratureRule line_rule(int degree) {
  if (degree < 0) throw std::invalid_argument("line_rule: negative degree");
  const int n = degree / 2 + 1;
  LineQuadratureRule r;
  gauss_jacobi01(n, 0, r.points, r.weights);
  return r;
}

TriQuadratureRule tri_rule(int degree) {
  if (degree < 0) throw std::invalid_argument("tri_rule: negative degree");
  const int n = degree / 2 + 1;
  Eigen::VectorXd t1, w1, t2, w2;
  gauss_jacobi01(n, 1, t1, w1);  // collapsed direction
  gauss_jacobi01(n, 0, t2, w2);
  TriQuadratureRule r;
  r.points.resize(2, n * n);
  r.weights.resize(n * n);
  int q = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j, ++q) {
      const double y = t1(i);
      const double x = t2(j) * (1.0 - t1(i));
      r.points.col(q) = Eigen::Vector2d(x, y);
      r.weights(q) = w1(i) * w2(j);
    }
  return r;
}

QuadratureRule tet_rule(int degree) {
  if (degree < 0) throw std::invalid_argument("tet_rule: negative degree");
  const int n = degree / 2 + 1;
  Eigen::VectorXd t1, w1, t2, w2, t3, w3;
  gauss_jacobi01(n, 2, t1, w1);
  gauss_jacobi01(n, 1, t2, w2);
  gauss_jacobi01(n, 0, t3, w3);
  QuadratureRule r;
  r.degree = 2 * n - 1;
  r.points.resize(3, n * n * n);
  r.weights.resize(n * n * n);
  int q = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k, ++q) {
        const double z = t1(i);
        const double y = t2(j) * (1.0 - t1(i));
        const double x = t3(k) * (1.0 - t1(i)) * (1.0 - t2(j));
        r.points.col(q) = Eigen::Vector3d(x, y, z);
        r.weights(q) = w1(i) * w2(j) * w3(k);
      }
  return r;
}

}  // namespace ferroflow
