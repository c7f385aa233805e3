#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "ferroflow/mesh.hpp"
#include "ferroflow/quadrature.hpp"
#include "ferroflow/spaces.hpp"

namespace ferroflow {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Assembled forms over all entity DOFs (constrained ones included);
/// boundary conditions are applied by the solver layer. Element loops are
/// deterministic: triplets are emitted in cell order regardless of the
/// FERROFLOW_THREADS setting.
class Assembler {
 public:
  Assembler(const Mesh& mesh, const DofMap& vel, const DofMap& pres,
            const DofMap& edge, const DofMap& face, const DofMap& cell);

  const Mesh& mesh() const { return mesh_; }
  const DofMap& dofmap(SpaceKind kind) const;

  // constant-coefficient bilinear forms, exact quadrature
  SpMat mass(SpaceKind kind) const;
  SpMat stiffness_velocity() const;        // (grad u, grad v)
  SpMat divdiv_face() const;               // (div m, div F)
  SpMat curl_edge_to_face() const;         // rows Face0, cols Edge0: (curl k, F)
  SpMat div_face_to_cell() const;          // rows Cell0, cols Face0: (div F, r)
  SpMat div_velocity_to_pressure() const;  // rows PressureP1, cols velocity

  // b(w; m, F) = 1/2 (w.F, div m) - 1/2 (w.m, div F), rows = test F, cols = m
  SpMat bform(const FieldCoefficients& w) const;

  // cross matrices with frozen fields (Algorithm stage couplings)
  // rows Edge0, cols Face0: (u_prev x m, zeta)
  SpMat cross_velocity_face_to_edge(const FieldCoefficients& u_prev) const;
  // rows/cols Face0: (m x (m_prev x H), F)
  SpMat cross_trial_outer(const FieldCoefficients& m_prev,
                          const FieldCoefficients& H) const;
  // rows/cols Face0: (m_prev x (m x H), F)
  SpMat cross_trial_inner(const FieldCoefficients& m_prev,
                          const FieldCoefficients& H) const;

  // load vectors
  Eigen::VectorXd load_velocity(const VectorField& f, double t) const;
  Eigen::VectorXd load_face(const VectorField& f, double t) const;
  Eigen::VectorXd load_cell(const ScalarField& f, double t) const;
  // (u_prev x curl u_prev, v) over velocity test functions
  Eigen::VectorXd convection_load(const FieldCoefficients& u_prev) const;
  // (v x k, H) over velocity test functions
  Eigen::VectorXd torque_load(const FieldCoefficients& k,
                              const FieldCoefficients& H) const;
  // b(v; H, m) over velocity test functions
  Eigen::VectorXd bform_load(const FieldCoefficients& H,
                             const FieldCoefficients& m) const;
  // (m_prev x (m_prev x H), F) over Face0 test functions
  Eigen::VectorXd quad_load(const FieldCoefficients& m_prev,
                            const FieldCoefficients& H) const;

  /// L2 integrals of the basis functions; the weight row of a zero-mean
  /// Lagrange multiplier.
  Eigen::VectorXd basis_measures(SpaceKind kind) const;

 private:
  const Mesh& mesh_;
  const DofMap& vel_;
  const DofMap& pres_;
  const DofMap& edge_;
  const DofMap& face_;
  const DofMap& cell_;
};

/// Parallel cell loop with deterministic, cell-ordered output. The worker
/// appends triplets for its cell into the given buffer. Thread count comes
/// from FERROFLOW_THREADS (default: hardware concurrency, capped at 8).
void assemble_cells(
    int ncells,
    const std::function<void(int cell, std::vector<Triplet>&)>& worker,
    std::vector<Triplet>& out);

int assembly_threads();

}  // namespace ferroflow
