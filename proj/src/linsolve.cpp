#include "ferroflow/linsolve.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ferroflow {

int BlockSystem::block_offset(int b) const {
  return std::accumulate(block_sizes.begin(), block_sizes.begin() + b, 0);
}

int BlockSystem::total_size() const {
  return std::accumulate(block_sizes.begin(), block_sizes.end(), 0);
}

void BlockSystem::add_block(int rows, int cols, int row_block, int col_block,
                            const Eigen::SparseMatrix<double>& A,
                            double scale) {
  if (A.rows() != rows || A.cols() != cols)
    throw std::invalid_argument(stage + ": block dimension mismatch");
  const int r0 = block_offset(row_block), c0 = block_offset(col_block);
  for (int k = 0; k < A.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
      triplets.emplace_back(r0 + static_cast<int>(it.row()),
                            c0 + static_cast<int>(it.col()),
                            scale * it.value());
}

void BlockSystem::set_rhs_block(int block, const Eigen::VectorXd& v) {
  if (rhs.size() != total_size()) rhs = Eigen::VectorXd::Zero(total_size());
  rhs.segment(block_offset(block), block_sizes[block]) = v;
}

void BlockSystem::add_rhs_block(int block, const Eigen::VectorXd& v,
                                double scale) {
  if (rhs.size() != total_size()) rhs = Eigen::VectorXd::Zero(total_size());
  rhs.segment(block_offset(block), block_sizes[block]) += scale * v;
}

BlockSolver::BlockSolver(const BlockSystem& system)
    : stage_(system.stage), constraints_(system.constraints) {
  n_ = system.total_size();
  n_aug_ = n_ + static_cast<int>(constraints_.size());
  offsets_.resize(system.block_sizes.size());
  for (size_t b = 0; b < system.block_sizes.size(); ++b)
    offsets_[b] = system.block_offset(static_cast<int>(b));

  std::vector<Eigen::Triplet<double>> trip = system.triplets;
  for (size_t c = 0; c < constraints_.size(); ++c) {
    const auto& mc = constraints_[c];
    const int mult = n_ + static_cast<int>(c);
    const int off = offsets_[mc.block];
    for (int i = 0; i < mc.weights.size(); ++i) {
      if (mc.weights(i) == 0.0) continue;
      trip.emplace_back(mult, off + i, mc.weights(i));
      trip.emplace_back(off + i, mult, mc.weights(i));
    }
  }
  A_.resize(n_aug_, n_aug_);
  A_.setFromTriplets(trip.begin(), trip.end());
  A_.makeCompressed();
  for (int k = 0; k < A_.nonZeros(); ++k)
    norm_max_ = std::max(norm_max_, std::abs(A_.valuePtr()[k]));
  if (!Eigen::Map<const Eigen::VectorXd>(A_.valuePtr(), A_.nonZeros())
           .allFinite())
    throw std::invalid_argument(stage_ + ": non-finite matrix entries");

  lu_.compute(A_);
  if (lu_.info() != Eigen::Success)
    throw std::runtime_error(stage_ + ": singular sparse factorization");
}

Eigen::VectorXd BlockSolver::solve(const Eigen::VectorXd& rhs) const {
  if (rhs.size() != n_)
    throw std::invalid_argument(stage_ + ": rhs size mismatch");
  if (!rhs.allFinite())
    throw std::invalid_argument(stage_ + ": non-finite rhs");
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n_aug_);
  b.head(n_) = rhs;
  const Eigen::VectorXd x = lu_.solve(b);
  if (lu_.info() != Eigen::Success)
    throw std::runtime_error(stage_ + ": sparse solve failed");

  const double resid = (A_ * x - b).norm();
  const double bound = 1e-10 * (norm_max_ * x.norm() + b.norm());
  if (resid > bound)
    throw std::runtime_error(stage_ + ": solve residual above tolerance");
  for (size_t c = 0; c < constraints_.size(); ++c) {
    const auto& mc = constraints_[c];
    const double mean =
        mc.weights.dot(x.segment(offsets_[mc.block], mc.weights.size()));
    if (std::abs(mean) > 1e-11 * std::max(1.0, x.norm()))
      throw std::runtime_error(stage_ + ": zero-mean constraint violated");
  }
  return x.head(n_);
}

Eigen::VectorXd solve(const BlockSystem& system) {
  return BlockSolver(system).solve(system.rhs);
}

Eigen::VectorXd preconditioned_solve(const BlockSolver& base,
                                     const BlockSystem& system) {
  if (!system.constraints.empty())
    throw std::invalid_argument(system.stage +
                                ": preconditioned_solve takes no constraints");
  const int n = system.total_size();
  if (base.total_size() != n)
    throw std::invalid_argument(system.stage + ": preconditioner size mismatch");

  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(system.triplets.begin(), system.triplets.end());
  A.makeCompressed();
  double norm_max = 0.0;
  for (int k = 0; k < A.nonZeros(); ++k)
    norm_max = std::max(norm_max, std::abs(A.valuePtr()[k]));

  const Eigen::VectorXd& b = system.rhs;
  Eigen::VectorXd x = base.solve(b);
  double prev_resid = std::numeric_limits<double>::max();
  constexpr int kMaxSweeps = 60;
  for (int it = 0; it < kMaxSweeps; ++it) {
    const Eigen::VectorXd r = b - A * x;
    const double resid = r.norm();
    if (resid <= 1e-10 * (norm_max * x.norm() + b.norm())) return x;
    if (!(resid < 0.9 * prev_resid)) break;  // stalled or diverging
    prev_resid = resid;
    x += base.solve(r);
  }
  // the perturbation was too large for defect correction; pay for a full
  // factorization instead of failing
  return BlockSolver(system).solve(b);
}

}  // namespace ferroflow
