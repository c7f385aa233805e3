#pragma once

#include <Eigen/Dense>

namespace ferroflow {

/// Quadrature on the reference tetrahedron {x,y,z >= 0, x+y+z <= 1}.
/// Points are reference coordinates, weights sum to the reference volume 1/6.
struct QuadratureRule {
  Eigen::Matrix3Xd points;
  Eigen::VectorXd weights;
  int degree = 0;  // polynomials up to this total degree integrate exactly

  int size() const { return static_cast<int>(weights.size()); }
};

/// Conical-product Gauss rule exact for the requested total degree.
QuadratureRule tet_rule(int degree);

/// Gauss rule on the reference triangle {x,y >= 0, x+y <= 1}; weights sum 1/2.
struct TriQuadratureRule {
  Eigen::Matrix2Xd points;
  Eigen::VectorXd weights;
};
TriQuadratureRule tri_rule(int degree);

/// Gauss-Legendre on [0,1]; weights sum 1.
struct LineQuadratureRule {
  Eigen::VectorXd points;
  Eigen::VectorXd weights;
};
LineQuadratureRule line_rule(int degree);

}  // namespace ferroflow
