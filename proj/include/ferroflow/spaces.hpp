#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <vector>

#include "ferroflow/mesh.hpp"

namespace ferroflow {

enum class SpaceKind {
  MiniVelocity,  // vector P1 + per-component cell bubble, Dirichlet vertices
  PressureP1,    // continuous P1, zero mean
  Edge0,         // lowest-order Nedelec; no essential boundary condition:
                 // the curl of the exact magnetization carries a nonzero
                 // tangential trace, and constraining it stalls convergence
                 // (the stability cancellations never use the trace)
  Face0,         // lowest-order Raviart-Thomas, zero normal trace
  Cell0,         // piecewise constants, zero mean
};

inline bool is_vector_space(SpaceKind k) {
  return k == SpaceKind::MiniVelocity || k == SpaceKind::Edge0 ||
         k == SpaceKind::Face0;
}

/// Mesh-entity to global DOF mapping with per-cell orientation signs.
/// Global numbering covers all entity DOFs (including constrained ones);
/// free_index maps a global DOF to its position among the unconstrained
/// unknowns, or -1 when the DOF is eliminated by the boundary condition.
struct DofMap {
  SpaceKind kind;
  int n_total = 0;
  int n_free = 0;
  bool zero_mean = false;
  int dofs_per_cell = 0;
  std::vector<std::vector<int>> cell_dofs;
  std::vector<std::vector<double>> cell_signs;
  std::vector<int> free_index;

  bool constrained(int dof) const { return free_index[dof] < 0; }
};

DofMap build_dofmap(const Mesh& mesh, SpaceKind kind);

/// Coefficient vector of one discrete field, tagged with its space.
struct FieldCoefficients {
  SpaceKind kind;
  Eigen::VectorXd values;  // length DofMap::n_total
};

/// Per-cell shape function evaluations at one reference point, in physical
/// coordinates (the affine/covariant/contravariant maps are already applied
/// through the physical barycentric gradients).
///
/// values:  3 x ndof for vector spaces, 1 x ndof for scalar spaces.
/// For MiniVelocity the local ordering is [v0x v0y v0z ... v3z bx by bz].
Eigen::MatrixXd shape_values(const Mesh& mesh, SpaceKind kind, int cell,
                             const Vec3& ref);

/// Derivative per DOF: gradient columns stacked as 3 x ndof for scalar
/// spaces; curl (3 x ndof) for Edge0; div (1 x ndof) for Face0; for
/// MiniVelocity the full gradients, flattened row-major as 9 x ndof,
/// entry (3*r + c, j) = d(phi_j)_r / dx_c.
Eigen::MatrixXd shape_derivatives(const Mesh& mesh, SpaceKind kind, int cell,
                                  const Vec3& ref);

/// Scalar mini basis on one cell: 4 vertex hats plus the 256*l0*l1*l2*l3
/// bubble. Building block for the vector-valued velocity space.
Eigen::Matrix<double, 1, 5> mini_scalar_values(const Vec3& ref);
Eigen::Matrix<double, 3, 5> mini_scalar_gradients(
    const Eigen::Matrix<double, 3, 4>& grad_lambda, const Vec3& ref);

using ScalarField = std::function<double(const Vec3&, double)>;
using VectorField = std::function<Vec3(const Vec3&, double)>;

/// Canonical interpolation: vertex values (MiniVelocity, bubble DOFs zero;
/// PressureP1 with mean shift), face-normal flux moments (Face0), edge
/// tangential moments (Edge0), cell means with mean shift (Cell0).
FieldCoefficients interpolate(const Mesh& mesh, const DofMap& dm,
                              const VectorField& f, double t);
FieldCoefficients interpolate_scalar(const Mesh& mesh, const DofMap& dm,
                                     const ScalarField& f, double t);

/// Point evaluation of a discrete field; locates the containing cell
/// (ties broken by lowest cell id). Throws if the point is outside [0,1]^3.
Vec3 eval_field(const Mesh& mesh, const DofMap& dm,
                const FieldCoefficients& coeffs, const Vec3& point);
double eval_scalar_field(const Mesh& mesh, const DofMap& dm,
                         const FieldCoefficients& coeffs, const Vec3& point);

/// Containing cell and reference coordinates for a point in [0,1]^3.
int locate_cell(const Mesh& mesh, const Vec3& point, Vec3& ref);

/// Coefficient matrix of curl: Edge0 -> Face0 (RT0 flux coefficients of the
/// curl of each edge basis function) and of div: Face0 -> Cell0. Their
/// composition vanishes identically (exactness of the discrete complex).
Eigen::SparseMatrix<double> coeff_curl(const Mesh& mesh, const DofMap& edge,
                                       const DofMap& face);
Eigen::SparseMatrix<double> coeff_div(const Mesh& mesh, const DofMap& face,
                                      const DofMap& cell);

}  // namespace ferroflow
