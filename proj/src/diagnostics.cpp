#include "ferroflow/diagnostics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ferroflow/quadrature.hpp"

namespace ferroflow {

namespace {

constexpr int kDegErrors = 5;
constexpr int kDegCross = 4;

Eigen::VectorXd gather(const DofMap& dm, const Eigen::VectorXd& values,
                       int cell) {
  Eigen::VectorXd loc(dm.dofs_per_cell);
  for (int i = 0; i < dm.dofs_per_cell; ++i)
    loc(i) = values(dm.cell_dofs[cell][i]);
  return loc;
}

Eigen::Matrix<double, 9, 1> flatten(const Mat3& G) {
  Eigen::Matrix<double, 9, 1> v;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) v(3 * r + c) = G(r, c);
  return v;
}

double relative(double err2, double ref2, const char* name) {
  if (!(ref2 > 0.0))
    throw std::invalid_argument(std::string("error_norms: exact norm of ") +
                                name + " vanishes");
  return std::sqrt(err2 / ref2);
}

}  // namespace

Diagnostics::Diagnostics(const Simulation& sim) : sim_(sim) {
  const Assembler& as = sim.assembler();
  Ms_ = as.mass(SpaceKind::MiniVelocity);
  Ks_ = as.stiffness_velocity();
  Mv_ = as.mass(SpaceKind::Face0);
  Mu_ = as.mass(SpaceKind::Edge0);
  DD_ = as.divdiv_face();
  G_ = as.div_velocity_to_pressure();
  D_ = as.div_face_to_cell();
}

EnergyRecord Diagnostics::energy(const SimState& state, int step) const {
  const SchemeParams& p = sim_.params();
  const Mesh& mesh = sim_.mesh();

  EnergyRecord rec;
  rec.step = step;
  rec.t = state.t;

  rec.E = state.u.values.dot(Ms_ * state.u.values) +
          state.m.values.dot(Mv_ * state.m.values) +
          p.mu0 * state.H.values.dot(Mv_ * state.H.values);

  // ||m x H||^2 by direct quadrature (quartic in the RT fields)
  double cross2 = 0.0;
  const auto rule = tet_rule(kDegCross);
  const DofMap& face = sim_.dofmap(SpaceKind::Face0);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const Eigen::VectorXd mloc = gather(face, state.m.values, c);
    const Eigen::VectorXd Hloc = gather(face, state.H.values, c);
    for (int q = 0; q < rule.size(); ++q) {
      const auto basis =
          shape_values(mesh, SpaceKind::Face0, c, rule.points.col(q));
      const Vec3 mv = basis * mloc;
      const Vec3 Hv = basis * Hloc;
      cross2 += rule.weights(q) * 6.0 * mesh.cell_volume[c] *
                mv.cross(Hv).squaredNorm();
    }
  }

  rec.F = p.eta * state.u.values.dot(Ks_ * state.u.values) +
          p.sigma * (p.mu0 + 1.0) * state.m.values.dot(DD_ * state.m.values) +
          p.sigma * state.k.values.dot(Mu_ * state.k.values) +
          (1.0 / p.tau) * state.m.values.dot(Mv_ * state.m.values) +
          (1.0 / p.tau) * (p.mu0 * (1.0 + p.chi0) + p.chi0) *
              state.H.values.dot(Mv_ * state.H.values) +
          p.mu0 * p.beta * cross2;

  rec.res_div_u = (G_ * state.u.values).lpNorm<Eigen::Infinity>();
  rec.res_mstat =
      restrict_vector(Mv_ * state.H.values + D_.transpose() * state.phi.values,
                      face)
          .lpNorm<Eigen::Infinity>();
  const Eigen::VectorXd flux = D_ * (state.H.values + state.m.values) +
                               sim_.source_cell_load(state.t);
  double worst = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c)
    worst = std::max(worst, std::abs(flux(c)) / mesh.cell_volume[c]);
  rec.res_flux = worst;
  return rec;
}

ErrorReport Diagnostics::error_norms(const SimState& state,
                                     const ExactSolution& exact) const {
  if (!exact.z || !exact.k)
    throw std::invalid_argument(
        "error_norms: derived exact fields missing (run forcing_from_exact)");
  const Mesh& mesh = sim_.mesh();
  const double t = state.t;
  const auto rule = tet_rule(kDegErrors);

  const DofMap& vel = sim_.dofmap(SpaceKind::MiniVelocity);
  const DofMap& pres = sim_.dofmap(SpaceKind::PressureP1);
  const DofMap& edge = sim_.dofmap(SpaceKind::Edge0);
  const DofMap& face = sim_.dofmap(SpaceKind::Face0);

  double e[ErrorReport::kFields] = {0}, r[ErrorReport::kFields] = {0};

  for (int c = 0; c < mesh.num_cells(); ++c) {
    const Eigen::VectorXd uloc = gather(vel, state.u.values, c);
    const Eigen::VectorXd ploc = gather(pres, state.p.values, c);
    const Eigen::VectorXd mloc = gather(face, state.m.values, c);
    const Eigen::VectorXd Hloc = gather(face, state.H.values, c);
    const Eigen::VectorXd zloc = gather(edge, state.z.values, c);
    const Eigen::VectorXd kloc = gather(edge, state.k.values, c);

    for (int q = 0; q < rule.size(); ++q) {
      const Vec3 ref = rule.points.col(q);
      const Vec3 x = mesh.map_to_physical(c, ref);
      const double wq = rule.weights(q) * 6.0 * mesh.cell_volume[c];

      const auto vvals = shape_values(mesh, SpaceKind::MiniVelocity, c, ref);
      const auto vders =
          shape_derivatives(mesh, SpaceKind::MiniVelocity, c, ref);
      const auto pvals = shape_values(mesh, SpaceKind::PressureP1, c, ref);
      const auto fvals = shape_values(mesh, SpaceKind::Face0, c, ref);
      const auto fdivs = shape_derivatives(mesh, SpaceKind::Face0, c, ref);
      const auto evals = shape_values(mesh, SpaceKind::Edge0, c, ref);

      const Vec3 ue = exact.u(x, t);
      const Eigen::Matrix<double, 9, 1> gue = flatten(exact.grad_u(x, t));
      const double pe = exact.ptilde(x, t);
      const Vec3 me = exact.m(x, t);
      const double dme = exact.div_m(x, t);
      const Vec3 He = exact.H(x, t);
      const double dHe = exact.div_H(x, t);
      const Vec3 ze = exact.z(x, t);
      const Vec3 ke = exact.k(x, t);

      e[0] += wq * (Vec3(vvals * uloc) - ue).squaredNorm();
      r[0] += wq * ue.squaredNorm();
      e[1] += wq * (Eigen::VectorXd(vders * uloc) - gue).squaredNorm();
      r[1] += wq * gue.squaredNorm();
      const double ph = (pvals * ploc)(0);
      e[2] += wq * (ph - pe) * (ph - pe);
      r[2] += wq * pe * pe;
      e[3] += wq * (Vec3(fvals * mloc) - me).squaredNorm();
      r[3] += wq * me.squaredNorm();
      const double dmh = (fdivs * mloc)(0);
      e[4] += wq * (dmh - dme) * (dmh - dme);
      r[4] += wq * dme * dme;
      e[5] += wq * (Vec3(fvals * Hloc) - He).squaredNorm();
      r[5] += wq * He.squaredNorm();
      const double dHh = (fdivs * Hloc)(0);
      e[6] += wq * (dHh - dHe) * (dHh - dHe);
      r[6] += wq * dHe * dHe;
      e[7] += wq * (Vec3(evals * zloc) - ze).squaredNorm();
      r[7] += wq * ze.squaredNorm();
      e[8] += wq * (Vec3(evals * kloc) - ke).squaredNorm();
      r[8] += wq * ke.squaredNorm();
    }
  }

  ErrorReport rep;
  rep.u_l2 = relative(e[0], r[0], "u");
  rep.u_h1 = relative(e[1], r[1], "grad u");
  rep.p_l2 = relative(e[2], r[2], "p");
  rep.m_l2 = relative(e[3], r[3], "m");
  rep.m_div = relative(e[4], r[4], "div m");
  rep.H_l2 = relative(e[5], r[5], "H");
  rep.H_div = relative(e[6], r[6], "div H");
  rep.z_l2 = relative(e[7], r[7], "z");
  rep.k_l2 = relative(e[8], r[8], "k");
  return rep;
}

ConvergenceSummary convergence_orders(
    const std::vector<ErrorReport>& reports) {
  ConvergenceSummary out;
  out.monotone.fill(true);
  const int L = static_cast<int>(reports.size());
  if (L < 2) return out;

  for (int i = 0; i + 1 < L; ++i) {
    std::array<double, ErrorReport::kFields> row{};
    const auto coarse = reports[i].as_array();
    const auto fine = reports[i + 1].as_array();
    for (int j = 0; j < ErrorReport::kFields; ++j) {
      row[j] = std::log2(coarse[j] / fine[j]);
      if (!(fine[j] < coarse[j])) out.monotone[j] = false;
    }
    out.pairwise.push_back(row);
  }

  // least squares slope of log2(err) against level index
  const double xbar = 0.5 * (L - 1);
  double sxx = 0.0;
  for (int i = 0; i < L; ++i) sxx += (i - xbar) * (i - xbar);
  for (int j = 0; j < ErrorReport::kFields; ++j) {
    double sxy = 0.0;
    for (int i = 0; i < L; ++i)
      sxy += (i - xbar) * std::log2(reports[i].as_array()[j]);
    out.regression[j] = -sxy / sxx;
  }
  return out;
}

}  // namespace ferroflow
