#pragma once

#include <array>
#include <vector>

#include "ferroflow/mms.hpp"
#include "ferroflow/stepper.hpp"

namespace ferroflow {

struct EnergyRecord {
  int step = 0;
  double t = 0.0;
  double E = 0.0;  // ||u||^2 + ||m||^2 + mu0 ||H||^2
  double F = 0.0;  // dissipation functional
  double res_div_u = 0.0;  // max |(div u_h, q_h)|
  double res_mstat = 0.0;  // max |(H_h,G) + (phi_h, div G)|
  double res_flux = 0.0;   // max elementwise |div H_h + div m_h + Q_h divHe|
};

/// Relative errors against the exact solution, in the order the paper's
/// tables use them.
struct ErrorReport {
  double u_l2 = 0, u_h1 = 0, p_l2 = 0, m_l2 = 0, m_div = 0;
  double H_l2 = 0, H_div = 0, z_l2 = 0, k_l2 = 0;

  static constexpr int kFields = 9;
  static constexpr std::array<const char*, kFields> kColumns = {
      "u_l2", "u_h1", "p_l2", "m_l2", "m_div",
      "H_l2", "H_div", "z_l2", "k_l2"};
  std::array<double, kFields> as_array() const {
    return {u_l2, u_h1, p_l2, m_l2, m_div, H_l2, H_div, z_l2, k_l2};
  }
};

struct ConvergenceSummary {
  // order between consecutive levels, one row per refinement
  std::vector<std::array<double, ErrorReport::kFields>> pairwise;
  // least-squares slope of log2(err) vs level over all levels
  std::array<double, ErrorReport::kFields> regression{};
  // false where the error sequence fails to decrease monotonically
  std::array<bool, ErrorReport::kFields> monotone{};
};

/// Energy/dissipation quadratic forms, constraint residuals, and error
/// norms for one discretization. Assembles its own copies of the needed
/// Galerkin matrices; never mutates states.
class Diagnostics {
 public:
  explicit Diagnostics(const Simulation& sim);

  EnergyRecord energy(const SimState& state, int step) const;
  /// Degree-5 quadrature norms against the exact callbacks at state.t.
  /// Throws std::invalid_argument when an exact norm vanishes.
  ErrorReport error_norms(const SimState& state,
                          const ExactSolution& exact) const;

 private:
  const Simulation& sim_;
  SpMat Ms_, Ks_, Mv_, Mu_, DD_, G_, D_;
};

/// Pairwise and regression orders for a sweep of halving mesh levels.
ConvergenceSummary convergence_orders(const std::vector<ErrorReport>& reports);

}  // namespace ferroflow
