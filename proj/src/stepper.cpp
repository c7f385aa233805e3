#include "ferroflow/stepper.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ferroflow {

SpMat restrict_matrix(const SpMat& A, const DofMap& row, const DofMap& col) {
  std::vector<Triplet> trip;
  trip.reserve(A.nonZeros());
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it) {
      const int r = row.free_index[it.row()];
      const int c = col.free_index[it.col()];
      if (r >= 0 && c >= 0) trip.emplace_back(r, c, it.value());
    }
  SpMat out(row.n_free, col.n_free);
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

Eigen::VectorXd restrict_vector(const Eigen::VectorXd& full,
                                const DofMap& dm) {
  Eigen::VectorXd out(dm.n_free);
  for (int i = 0; i < dm.n_total; ++i)
    if (dm.free_index[i] >= 0) out(dm.free_index[i]) = full(i);
  return out;
}

Eigen::VectorXd expand_vector(const Eigen::VectorXd& free_vals,
                              const DofMap& dm) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dm.n_total);
  for (int i = 0; i < dm.n_total; ++i)
    if (dm.free_index[i] >= 0) out(i) = free_vals(dm.free_index[i]);
  return out;
}

Simulation::Simulation(const Mesh& mesh, ExactSolution data,
                       SchemeParams params)
    : mesh_(mesh), data_(std::move(data)), params_(params) {
  if (params_.eta <= 0 || params_.mu0 <= 0 || params_.sigma <= 0 ||
      params_.tau <= 0 || params_.chi0 <= 0 || params_.beta <= 0)
    throw std::invalid_argument("stepper: model parameters must be positive");
  if (params_.dt <= 0 || params_.T <= 0 || params_.M < 1)
    throw std::invalid_argument("stepper: need dt > 0, T > 0, M >= 1");
  const double steps = params_.T / params_.dt;
  nsteps_ = static_cast<int>(std::lround(steps));
  if (nsteps_ < 1 || std::abs(params_.dt * nsteps_ - params_.T) > 1e-12)
    throw std::invalid_argument("stepper: dt must divide T");

  vel_ = build_dofmap(mesh_, SpaceKind::MiniVelocity);
  pres_ = build_dofmap(mesh_, SpaceKind::PressureP1);
  edge_ = build_dofmap(mesh_, SpaceKind::Edge0);
  face_ = build_dofmap(mesh_, SpaceKind::Face0);
  cell_ = build_dofmap(mesh_, SpaceKind::Cell0);
  assembler_ =
      std::make_unique<Assembler>(mesh_, vel_, pres_, edge_, face_, cell_);

  Ms_ = assembler_->mass(SpaceKind::MiniVelocity);
  Ks_ = assembler_->stiffness_velocity();
  G_ = assembler_->div_velocity_to_pressure();
  Mv_ = assembler_->mass(SpaceKind::Face0);
  DD_ = assembler_->divdiv_face();
  C_ = assembler_->curl_edge_to_face();
  D_ = assembler_->div_face_to_cell();
  Mu_ = assembler_->mass(SpaceKind::Edge0);

  Mv_ff_ = restrict_matrix(Mv_, face_, face_);
  DD_ff_ = restrict_matrix(DD_, face_, face_);
  C_fe_ = restrict_matrix(C_, face_, edge_);
  Ct_ef_ = restrict_matrix(SpMat(C_.transpose()), edge_, face_);
  Mu_ee_ = restrict_matrix(Mu_, edge_, edge_);

  {
    BlockSystem sys;
    sys.stage = "magnetostatic";
    sys.block_sizes = {face_.n_free, cell_.n_total};
    sys.add_block(face_.n_free, face_.n_free, 0, 0, Mv_ff_);
    sys.add_block(face_.n_free, cell_.n_total, 0, 1,
                  restrict_matrix(SpMat(D_.transpose()), face_, cell_));
    sys.add_block(cell_.n_total, face_.n_free, 1, 0,
                  restrict_matrix(D_, cell_, face_));
    sys.constraints.push_back(
        {1, assembler_->basis_measures(SpaceKind::Cell0)});
    mstat_solver_ = std::make_unique<BlockSolver>(sys);
  }
  {
    BlockSystem sys;
    sys.stage = "navier-stokes";
    sys.block_sizes = {vel_.n_free, pres_.n_total};
    sys.add_block(vel_.n_free, vel_.n_free, 0, 0,
                  SpMat(restrict_matrix(Ms_, vel_, vel_) +
                        params_.dt * params_.eta *
                            restrict_matrix(Ks_, vel_, vel_)));
    sys.add_block(vel_.n_free, pres_.n_total, 0, 1,
                  restrict_matrix(SpMat(G_.transpose()), vel_, pres_),
                  -params_.dt);
    sys.add_block(pres_.n_total, vel_.n_free, 1, 0,
                  restrict_matrix(G_, pres_, vel_));
    sys.constraints.push_back(
        {1, assembler_->basis_measures(SpaceKind::PressureP1)});
    ns_solver_ = std::make_unique<BlockSolver>(sys);
  }
  {
    BlockSystem sys;
    sys.stage = "edge-projection";
    sys.block_sizes = {edge_.n_free};
    sys.add_block(edge_.n_free, edge_.n_free, 0, 0, Mu_ee_);
    edge_mass_solver_ = std::make_unique<BlockSolver>(sys);
  }
  {
    BlockSystem sys;
    sys.stage = "magnetization-base";
    sys.block_sizes = {face_.n_free, edge_.n_free, edge_.n_free};
    sys.add_block(face_.n_free, face_.n_free, 0, 0,
                  SpMat((1.0 + params_.dt / params_.tau) * Mv_ff_ +
                        params_.sigma * params_.dt * DD_ff_));
    sys.add_block(face_.n_free, edge_.n_free, 0, 1, C_fe_, -0.5 * params_.dt);
    sys.add_block(face_.n_free, edge_.n_free, 0, 2, C_fe_,
                  params_.sigma * params_.dt);
    sys.add_block(edge_.n_free, edge_.n_free, 1, 1, Mu_ee_);
    sys.add_block(edge_.n_free, face_.n_free, 2, 0, Ct_ef_, -1.0);
    sys.add_block(edge_.n_free, edge_.n_free, 2, 2, Mu_ee_);
    mag_base_solver_ = std::make_unique<BlockSolver>(sys);
  }
}

const DofMap& Simulation::dofmap(SpaceKind kind) const {
  switch (kind) {
    case SpaceKind::MiniVelocity: return vel_;
    case SpaceKind::PressureP1: return pres_;
    case SpaceKind::Edge0: return edge_;
    case SpaceKind::Face0: return face_;
    case SpaceKind::Cell0: return cell_;
  }
  throw std::logic_error("stepper: unknown space");
}

Eigen::VectorXd Simulation::velocity_boundary_values(double t) const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(vel_.n_total);
  if (data_.homogeneous) return g;
  for (int v = 0; v < mesh_.num_vertices(); ++v)
    if (mesh_.vertex_on_boundary[v])
      g.segment<3>(3 * v) = data_.g_u(mesh_.vertices[v], t);
  return g;
}

Eigen::VectorXd Simulation::source_cell_load(double t) const {
  if (data_.homogeneous) return Eigen::VectorXd::Zero(cell_.n_total);
  Eigen::VectorXd q = assembler_->load_cell(data_.divHe, t);
  const Eigen::VectorXd measures =
      assembler_->basis_measures(SpaceKind::Cell0);
  q -= (q.sum() / measures.sum()) * measures;
  return q;
}

std::pair<FieldCoefficients, FieldCoefficients> Simulation::magnetostatic_solve(
    const FieldCoefficients& m, double t) const {
  Eigen::VectorXd rhs =
      Eigen::VectorXd::Zero(face_.n_free + cell_.n_total);
  rhs.tail(cell_.n_total) = -(D_ * m.values) - source_cell_load(t);
  const Eigen::VectorXd x = mstat_solver_->solve(rhs);
  FieldCoefficients H{SpaceKind::Face0,
                      expand_vector(x.head(face_.n_free), face_)};
  FieldCoefficients phi{SpaceKind::Cell0, x.tail(cell_.n_total)};
  return {std::move(H), std::move(phi)};
}

std::tuple<FieldCoefficients, FieldCoefficients, FieldCoefficients>
Simulation::magnetization_solve(const FieldCoefficients& u_prev,
                                const FieldCoefficients& m_prev,
                                const FieldCoefficients& m_old,
                                const FieldCoefficients& H, double t) const {
  const double dt = params_.dt;
  const SpMat Bb = assembler_->bform(u_prev);
  const SpMat X = assembler_->cross_velocity_face_to_edge(u_prev);
  const SpMat K =
      SpMat(assembler_->cross_trial_outer(m_prev, H) +
            assembler_->cross_trial_inner(m_prev, H));
  const SpMat X_ef = restrict_matrix(X, edge_, face_);

  BlockSystem sys;
  sys.stage = "magnetization";
  sys.block_sizes = {face_.n_free, edge_.n_free, edge_.n_free};
  sys.add_block(face_.n_free, face_.n_free, 0, 0,
                SpMat((1.0 + dt / params_.tau) * Mv_ff_ +
                      params_.sigma * dt * DD_ff_ +
                      dt * restrict_matrix(Bb, face_, face_) +
                      params_.beta * dt * restrict_matrix(K, face_, face_)));
  sys.add_block(face_.n_free, edge_.n_free, 0, 1, C_fe_, -0.5 * dt);
  sys.add_block(face_.n_free, edge_.n_free, 0, 2,
                SpMat(params_.sigma * dt * C_fe_ +
                      0.5 * dt * SpMat(X_ef.transpose())));
  sys.add_block(edge_.n_free, face_.n_free, 1, 0, X_ef, -1.0);
  sys.add_block(edge_.n_free, edge_.n_free, 1, 1, Mu_ee_);
  sys.add_block(edge_.n_free, face_.n_free, 2, 0, Ct_ef_, -1.0);
  sys.add_block(edge_.n_free, edge_.n_free, 2, 2, Mu_ee_);

  Eigen::VectorXd rhs_m = Mv_ * m_old.values +
                          (params_.chi0 / params_.tau) * dt * (Mv_ * H.values) +
                          params_.beta * dt * assembler_->quad_load(m_prev, H);
  if (!data_.homogeneous)
    rhs_m += dt * assembler_->load_face(data_.f_m, t);
  sys.rhs = Eigen::VectorXd::Zero(sys.total_size());
  sys.set_rhs_block(0, restrict_vector(rhs_m, face_));

  const Eigen::VectorXd x = preconditioned_solve(*mag_base_solver_, sys);
  FieldCoefficients m{SpaceKind::Face0,
                      expand_vector(x.head(face_.n_free), face_)};
  FieldCoefficients z{SpaceKind::Edge0,
                      expand_vector(x.segment(face_.n_free, edge_.n_free),
                                    edge_)};
  FieldCoefficients k{SpaceKind::Edge0,
                      expand_vector(x.tail(edge_.n_free), edge_)};
  return {std::move(m), std::move(z), std::move(k)};
}

std::pair<FieldCoefficients, FieldCoefficients> Simulation::nstokes_solve(
    const FieldCoefficients& u_prev, const FieldCoefficients& u_old,
    const FieldCoefficients& m, const FieldCoefficients& H,
    const FieldCoefficients& k, double t) const {
  const double dt = params_.dt;
  const Eigen::VectorXd g = velocity_boundary_values(t);

  Eigen::VectorXd rhs_u =
      dt * params_.mu0 * assembler_->bform_load(H, m) +
      0.5 * params_.mu0 * dt * assembler_->torque_load(k, H) +
      Ms_ * u_old.values + dt * assembler_->convection_load(u_prev) -
      (Ms_ * g + dt * params_.eta * (Ks_ * g));
  if (!data_.homogeneous)
    rhs_u += dt * assembler_->load_velocity(data_.f_u, t);

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(vel_.n_free + pres_.n_total);
  rhs.head(vel_.n_free) = restrict_vector(rhs_u, vel_);
  rhs.tail(pres_.n_total) = -(G_ * g);

  const Eigen::VectorXd x = ns_solver_->solve(rhs);
  FieldCoefficients u{SpaceKind::MiniVelocity,
                      expand_vector(x.head(vel_.n_free), vel_) + g};
  FieldCoefficients p{SpaceKind::PressureP1, x.tail(pres_.n_total)};
  return {std::move(u), std::move(p)};
}

SimState Simulation::initial_state() const {
  SimState s;
  s.t = 0.0;
  s.u = interpolate(mesh_, vel_, data_.u, 0.0);
  if (data_.homogeneous) {
    // the decaying-energy setting requires a no-slip boundary; clip the
    // interpolant's boundary trace
    for (int v = 0; v < mesh_.num_vertices(); ++v)
      if (mesh_.vertex_on_boundary[v]) s.u.values.segment<3>(3 * v).setZero();
  }
  s.m = interpolate(mesh_, face_, data_.m, 0.0);
  for (int f = 0; f < mesh_.num_faces(); ++f)
    if (mesh_.face_on_boundary[f]) s.m.values(f) = 0.0;
  s.p = FieldCoefficients{SpaceKind::PressureP1,
                          Eigen::VectorXd::Zero(pres_.n_total)};

  auto [H, phi] = magnetostatic_solve(s.m, 0.0);
  s.H = std::move(H);
  s.phi = std::move(phi);

  // z0, k0 from the constitutive equations: (z, zeta) = (u0 x m0, zeta),
  // (k, kappa) = (m0, curl kappa)
  const SpMat X = assembler_->cross_velocity_face_to_edge(s.u);
  const Eigen::VectorXd z_free = edge_mass_solver_->solve(
      restrict_vector(X * s.m.values, edge_));
  const Eigen::VectorXd k_free = edge_mass_solver_->solve(
      restrict_vector(C_.transpose() * s.m.values, edge_));
  s.z = FieldCoefficients{SpaceKind::Edge0, expand_vector(z_free, edge_)};
  s.k = FieldCoefficients{SpaceKind::Edge0, expand_vector(k_free, edge_)};
  return s;
}

SimState Simulation::step(const SimState& state, int step_index) const {
  const double t = step_index * params_.dt;
  try {
    FieldCoefficients u_prev = state.u, m_prev = state.m;
    FieldCoefficients H, phi, m, z, k, u, p;
    for (int sweep = 1; sweep <= params_.M; ++sweep) {
      std::tie(H, phi) = magnetostatic_solve(m_prev, t);
      std::tie(m, z, k) = magnetization_solve(u_prev, m_prev, state.m, H, t);
      std::tie(u, p) = nstokes_solve(u_prev, state.u, m, H, k, t);
      u_prev = u;
      m_prev = m;
    }
    // re-solve the field for the accepted magnetization so div H + div m
    // balances the source exactly in the stored state
    std::tie(H, phi) = magnetostatic_solve(m, t);
    SimState next;
    next.t = t;
    next.u = std::move(u);
    next.p = std::move(p);
    next.m = std::move(m);
    next.z = std::move(z);
    next.k = std::move(k);
    next.H = std::move(H);
    next.phi = std::move(phi);
    return next;
  } catch (const std::exception& e) {
    throw std::runtime_error("step " + std::to_string(step_index) + ": " +
                             e.what());
  }
}

SimState Simulation::run(const StepCallback& callback) const {
  SimState state = initial_state();
  if (callback) callback(0, state);
  for (int n = 1; n <= nsteps_; ++n) {
    state = step(state, n);
    if (callback) callback(n, state);
  }
  return state;
}

}  // namespace ferroflow
