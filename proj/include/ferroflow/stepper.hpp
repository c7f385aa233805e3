#pragma once

#include <functional>
#include <memory>
#include <tuple>
#include <utility>
#include <vector>

#include "ferroflow/assembly.hpp"
#include "ferroflow/linsolve.hpp"
#include "ferroflow/mesh.hpp"
#include "ferroflow/mms.hpp"
#include "ferroflow/spaces.hpp"

namespace ferroflow {

struct SchemeParams {
  double eta = 1.0;
  double mu0 = 1.0;
  double sigma = 1.0;
  double tau = 1.0;
  double chi0 = 1.0;
  double beta = 1.0;
  double dt = 0.0;
  double T = 0.0;
  int M = 2;  // quasi-Newton sweeps per step
};

struct SimState {
  double t = 0.0;
  FieldCoefficients u, p, m, z, k, H, phi;
};

/// Drop constrained rows/cols of an all-DOF matrix or vector, or scatter free
/// values back into the all-DOF numbering.
SpMat restrict_matrix(const SpMat& A, const DofMap& row, const DofMap& col);
Eigen::VectorXd restrict_vector(const Eigen::VectorXd& full, const DofMap& dm);
Eigen::VectorXd expand_vector(const Eigen::VectorXd& free_vals,
                              const DofMap& dm);

/// Semi-implicit time stepping of the coupled flow/magnetization/field
/// system. Each step runs M sweeps of three staged linear solves
/// (magnetostatics -> magnetization -> Navier-Stokes) with the nonlinear
/// couplings frozen at the previous sweep, then refreshes the magnetostatic
/// pair so the stored state satisfies the flux constraint with the final
/// magnetization.
///
/// The magnetostatic and Navier-Stokes matrices are constant in time and
/// factorized once; only the magnetization block is rebuilt per sweep.
class Simulation {
 public:
  Simulation(const Mesh& mesh, ExactSolution data, SchemeParams params);

  const Mesh& mesh() const { return mesh_; }
  const SchemeParams& params() const { return params_; }
  const ExactSolution& data() const { return data_; }
  const Assembler& assembler() const { return *assembler_; }
  const DofMap& dofmap(SpaceKind kind) const;
  int num_steps() const { return nsteps_; }

  /// Piecewise-constant projection load of the divHe source, deflated to
  /// exact zero mean so the potential block stays compatible (the analytic
  /// source integrates to zero; quadrature leaves a spurious mean).
  Eigen::VectorXd source_cell_load(double t) const;

  SimState initial_state() const;
  SimState step(const SimState& state, int step_index) const;

  using StepCallback = std::function<void(int step, const SimState&)>;
  /// Run from t=0 to T; the callback sees the initial state (step 0) and
  /// every accepted step. Returns the final state.
  SimState run(const StepCallback& callback = {}) const;

  // stage solves, exposed for testing
  std::pair<FieldCoefficients, FieldCoefficients> magnetostatic_solve(
      const FieldCoefficients& m, double t) const;
  std::tuple<FieldCoefficients, FieldCoefficients, FieldCoefficients>
  magnetization_solve(const FieldCoefficients& u_prev,
                      const FieldCoefficients& m_prev,
                      const FieldCoefficients& m_old,
                      const FieldCoefficients& H, double t) const;
  std::pair<FieldCoefficients, FieldCoefficients> nstokes_solve(
      const FieldCoefficients& u_prev, const FieldCoefficients& u_old,
      const FieldCoefficients& m, const FieldCoefficients& H,
      const FieldCoefficients& k, double t) const;

 private:
  Eigen::VectorXd velocity_boundary_values(double t) const;

  const Mesh& mesh_;
  ExactSolution data_;
  SchemeParams params_;
  int nsteps_ = 0;

  DofMap vel_, pres_, edge_, face_, cell_;
  std::unique_ptr<Assembler> assembler_;

  // constant Galerkin matrices over all entity DOFs
  SpMat Ms_, Ks_, G_;       // velocity mass/stiffness, (div u, q)
  SpMat Mv_, DD_, C_, D_;   // face mass, divdiv, (curl k, F), (div F, r)
  SpMat Mu_;                // edge mass

  // constant restricted blocks reused by the per-sweep magnetization system
  SpMat Mv_ff_, DD_ff_, C_fe_, Ct_ef_, Mu_ee_;

  std::unique_ptr<BlockSolver> mstat_solver_;
  std::unique_ptr<BlockSolver> ns_solver_;
  std::unique_ptr<BlockSolver> edge_mass_solver_;
  // factorization of the velocity-independent part of the magnetization
  // block; the per-sweep systems differ from it only by O(dt) couplings and
  // are solved by defect correction against it
  std::unique_ptr<BlockSolver> mag_base_solver_;
};

}  // namespace ferroflow
