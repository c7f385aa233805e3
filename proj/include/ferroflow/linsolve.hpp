#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#ifdef FERROFLOW_WITH_UMFPACK
#include <Eigen/UmfPackSupport>
#endif
#include <string>
#include <vector>

namespace ferroflow {

/// Sparse block system with optional zero-mean constraints. Each constraint
/// appends one Lagrange multiplier row/column carrying the basis measures of
/// the constrained block, so the assembled blocks stay untouched.
struct BlockSystem {
  std::string stage;                 // used in error messages
  std::vector<int> block_sizes;      // named by position
  std::vector<Eigen::Triplet<double>> triplets;  // block-offset global indices
  Eigen::VectorXd rhs;

  struct MeanConstraint {
    int block;
    Eigen::VectorXd weights;  // length = block size
  };
  std::vector<MeanConstraint> constraints;

  int block_offset(int b) const;
  int total_size() const;  // without multiplier rows

  void add_block(int rows, int cols, int row_block, int col_block,
                 const Eigen::SparseMatrix<double>& A, double scale = 1.0);
  void set_rhs_block(int block, const Eigen::VectorXd& v);
  void add_rhs_block(int block, const Eigen::VectorXd& v, double scale = 1.0);
};

/// Factorization of a BlockSystem, reusable across right-hand sides.
/// Sparse LU with a deterministic fill-reducing ordering (UMFPACK when built
/// with it, Eigen SparseLU/COLAMD otherwise); throws on singular
/// factorizations or non-finite input, naming the stage.
class BlockSolver {
 public:
  explicit BlockSolver(const BlockSystem& system);

  /// Solve for the stored RHS or a caller-provided one (multipliers are
  /// stripped from the returned vector). Checks the residual
  /// ||Ax-b|| <= 1e-10 (||A||_max ||x|| + ||b||) and the weighted means of
  /// constrained blocks.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

  int total_size() const { return n_; }

 private:
  std::string stage_;
  int n_ = 0;           // unknowns without multipliers
  int n_aug_ = 0;       // with multipliers
  double norm_max_ = 0.0;
  Eigen::SparseMatrix<double> A_;
#ifdef FERROFLOW_WITH_UMFPACK
  Eigen::UmfPackLU<Eigen::SparseMatrix<double>> lu_;
#else
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
#endif
  std::vector<BlockSystem::MeanConstraint> constraints_;
  std::vector<int> offsets_;
};

Eigen::VectorXd solve(const BlockSystem& system);

/// Solve `system` by defect correction against a prefactorized nearby matrix:
/// x_{k+1} = x_k + base^{-1}(b - A x_k). Converges quickly when system - base
/// is a small (e.g. O(dt)) perturbation; meets the same residual tolerance as
/// a direct solve. Falls back to factorizing `system` itself if the iteration
/// stalls. `base` must share the block layout and have no constraints.
Eigen::VectorXd preconditioned_solve(const BlockSolver& base,
                                     const BlockSystem& system);

}  // namespace ferroflow
