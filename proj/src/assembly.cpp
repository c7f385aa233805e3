#include "ferroflow/assembly.hpp"

#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace ferroflow {

namespace {

// quadrature degrees: exact for every polynomial integrand below
constexpr int kDegMassVel = 8;    // bubble x bubble
constexpr int kDegStiffVel = 6;   // grad bubble x grad bubble
constexpr int kDegMassLin = 2;    // P1/RT0/NE0 pairs
constexpr int kDegDivVelPres = 4; // div(bubble) x P1
constexpr int kDegBform = 5;      // bubble x RT0 x const
constexpr int kDegCrossUF = 6;    // bubble x RT0 x NE0
constexpr int kDegCrossMMH = 4;   // RT0^4
constexpr int kDegTorque = 6;     // bubble x NE0 x RT0
constexpr int kDegConvection = 9; // inexact anyway (frozen iterate); generous
constexpr int kDegLoadVel = 6;
constexpr int kDegLoadFace = 5;
constexpr int kDegLoadCell = 5;

Eigen::Vector4d bary(const Vec3& ref) {
  return {1.0 - ref.sum(), ref.x(), ref.y(), ref.z()};
}

Eigen::Matrix<double, 3, 4> rt_values(const Mesh& mesh, int c, const Vec3& x) {
  Eigen::Matrix<double, 3, 4> v;
  const double vol = mesh.cell_volume[c];
  for (int f = 0; f < 4; ++f)
    v.col(f) = mesh.cell_face_sign[c][f] / (3.0 * vol) *
               (x - mesh.vertices[mesh.cells[c][f]]);
  return v;
}

Eigen::Vector4d rt_divs(const Mesh& mesh, int c) {
  Eigen::Vector4d d;
  for (int f = 0; f < 4; ++f)
    d(f) = mesh.cell_face_sign[c][f] / mesh.cell_volume[c];
  return d;
}

Eigen::Matrix<double, 3, 6> ne_values(const Mesh& mesh, int c,
                                      const Eigen::Vector4d& l) {
  const auto& G = mesh.cell_grad_lambda[c];
  Eigen::Matrix<double, 3, 6> v;
  for (int e = 0; e < 6; ++e) {
    const int a = kLocalEdges[e][0], b = kLocalEdges[e][1];
    v.col(e) = mesh.cell_edge_sign[c][e] * (l(a) * G.col(b) - l(b) * G.col(a));
  }
  return v;
}

Eigen::Matrix<double, 3, 6> ne_curls(const Mesh& mesh, int c) {
  const auto& G = mesh.cell_grad_lambda[c];
  Eigen::Matrix<double, 3, 6> v;
  for (int e = 0; e < 6; ++e) {
    const int a = kLocalEdges[e][0], b = kLocalEdges[e][1];
    v.col(e) =
        mesh.cell_edge_sign[c][e] * 2.0 * Vec3(G.col(a)).cross(Vec3(G.col(b)));
  }
  return v;
}

// velocity iterate and its curl at a reference point of one cell
struct VelocityEval {
  Vec3 value;
  Vec3 curl;
};

VelocityEval eval_velocity(const Mesh& mesh, const DofMap& dm,
                           const Eigen::VectorXd& coeffs, int c,
                           const Vec3& ref) {
  const auto vals = mini_scalar_values(ref);
  const auto grads = mini_scalar_gradients(mesh.cell_grad_lambda[c], ref);
  VelocityEval out{Vec3::Zero(), Vec3::Zero()};
  const auto& dofs = dm.cell_dofs[c];
  for (int i = 0; i < 5; ++i)
    for (int comp = 0; comp < 3; ++comp) {
      const double u = coeffs(dofs[3 * i + comp]);
      out.value(comp) += u * vals(i);
      out.curl += u * Vec3(grads.col(i)).cross(Vec3::Unit(comp));
    }
  // curl(phi e_c) = grad(phi) x e_c
  return out;
}

Vec3 eval_rt(const Mesh& mesh, const DofMap& dm, const Eigen::VectorXd& coeffs,
             int c, const Eigen::Matrix<double, 3, 4>& basis) {
  Vec3 out = Vec3::Zero();
  for (int f = 0; f < 4; ++f) out += coeffs(dm.cell_dofs[c][f]) * basis.col(f);
  return out;
}

Vec3 eval_ne(const Mesh& mesh, const DofMap& dm, const Eigen::VectorXd& coeffs,
             int c, const Eigen::Matrix<double, 3, 6>& basis) {
  Vec3 out = Vec3::Zero();
  for (int e = 0; e < 6; ++e) out += coeffs(dm.cell_dofs[c][e]) * basis.col(e);
  return out;
}

SpMat from_triplets(int rows, int cols, const std::vector<Triplet>& trip) {
  SpMat A(rows, cols);
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();
  return A;
}

}  // namespace

int assembly_threads() {
  if (const char* env = std::getenv("FERROFLOW_THREADS")) {
    const int t = std::atoi(env);
    if (t >= 1) return t;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return static_cast<int>(std::min(hc == 0 ? 1u : hc, 8u));
}

void assemble_cells(
    int ncells,
    const std::function<void(int cell, std::vector<Triplet>&)>& worker,
    std::vector<Triplet>& out) {
  const int nthreads = std::min(assembly_threads(), std::max(ncells, 1));
  if (nthreads <= 1) {
    for (int c = 0; c < ncells; ++c) worker(c, out);
    return;
  }
  std::vector<std::vector<Triplet>> buffers(nthreads);
  std::vector<std::thread> threads;
  const int chunk = (ncells + nthreads - 1) / nthreads;
  for (int t = 0; t < nthreads; ++t)
    threads.emplace_back([&, t] {
      const int lo = t * chunk, hi = std::min(ncells, lo + chunk);
      for (int c = lo; c < hi; ++c) worker(c, buffers[t]);
    });
  for (auto& th : threads) th.join();
  for (auto& buf : buffers)
    out.insert(out.end(), buf.begin(), buf.end());
}

Assembler::Assembler(const Mesh& mesh, const DofMap& vel, const DofMap& pres,
                     const DofMap& edge, const DofMap& face,
                     const DofMap& cell)
    : mesh_(mesh), vel_(vel), pres_(pres), edge_(edge), face_(face),
      cell_(cell) {}

const DofMap& Assembler::dofmap(SpaceKind kind) const {
  switch (kind) {
    case SpaceKind::MiniVelocity: return vel_;
    case SpaceKind::PressureP1: return pres_;
    case SpaceKind::Edge0: return edge_;
    case SpaceKind::Face0: return face_;
    case SpaceKind::Cell0: return cell_;
  }
  throw std::logic_error("dofmap: unknown space");
}

SpMat Assembler::mass(SpaceKind kind) const {
  const DofMap& dm = dofmap(kind);
  std::vector<Triplet> trip;

  if (kind == SpaceKind::Cell0) {
    for (int c = 0; c < mesh_.num_cells(); ++c)
      trip.emplace_back(c, c, mesh_.cell_volume[c]);
    return from_triplets(dm.n_total, dm.n_total, trip);
  }

  const int deg = kind == SpaceKind::MiniVelocity ? kDegMassVel : kDegMassLin;
  const auto rule = tet_rule(deg);
  assemble_cells(
      mesh_.num_cells(),
      [&](int c, std::vector<Triplet>& out) {
        const int nd = dm.dofs_per_cell;
        Eigen::MatrixXd local = Eigen::MatrixXd::Zero(nd, nd);
        for (int q = 0; q < rule.size(); ++q) {
          const Vec3 ref = rule.points.col(q);
          const double w = rule.weights(q) * 6.0 * mesh_.cell_volume[c];
          Eigen::MatrixXd basis;
          switch (kind) {
            case SpaceKind::MiniVelocity: {
              basis = shape_values(mesh_, kind, c, ref);
              break;
            }
            case SpaceKind::PressureP1:
              basis = bary(ref).transpose();
              break;
            case SpaceKind::Edge0:
              basis = ne_values(mesh_, c, bary(ref));
              break;
            case SpaceKind::Face0:
              basis = rt_values(mesh_, c, mesh_.map_to_physical(c, ref));
              break;
            default:
              break;
          }
          local.noalias() += w * basis.transpose() * basis;
        }
        for (int i = 0; i < nd; ++i)
          for (int j = 0; j < nd; ++j)
            out.emplace_back(dm.cell_dofs[c][i], dm.cell_dofs[c][j],
                             local(i, j));
      },
      trip);
  return from_triplets(dm.n_total, dm.n_total, trip);
}

SpMat Assembler::stiffness_velocity() const {
  const auto rule = tet_rule(kDegStiffVel);
  std::vector<Triplet> trip;
  assemble_cells(
      mesh_.num_cells(),
      [&](int c, std::vector<Triplet>& out) {
        Eigen::Matrix<double, 5, 5> local = Eigen::Matrix<double, 5, 5>::Zero();
        for (int q = 0; q < rule.size(); ++q) {
          const auto g =
              mini_scalar_gradients(mesh_.cell_grad_lambda[c], rule.points.col(q));
          local.noalias() +=
              rule.weights(q) * 6.0 * mesh_.cell_volume[c] * g.transpose() * g;
        }
        // component-diagonal vector structure
        for (int i = 0; i < 5; ++i)
          for (int j = 0; j < 5; ++j)
            for (int d = 0; d < 3; ++d)
              out.emplace_back(vel_.cell_dofs[c][3 * i + d],
                               vel_.cell_dofs[c][3 * j + d], local(i, j));
      },
      trip);
  return from_triplets(vel_.n_total, vel_.n_total, trip);
}

SpMat Assembler::divdiv_face() const {
  std::vector<Triplet> trip;
  for (int c = 0; c < mesh_.num_cells(); ++c) {
    const Eigen::Vector4d d = rt_divs(mesh_, c);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        trip.emplace_back(face_.cell_dofs[c][i], face_.cell_dofs[c][j],
                          d(i) * d(j) * mesh_.cell_volume[c]);
  }
  return from_triplets(face_.n_total, face_.n_total, trip);
}

SpMat Assembler::curl_edge_to_face() const {
  const auto rule = tet_rule(kDegMassLin);
  std::vector<Triplet> trip;
  assemble_cells(
      mesh_.num_cells(),
      [&](int c, std::vector<Triplet>& out) {
        const auto curls = ne_curls(mesh_, c);
        Eigen::Matrix<double, 4, 6> local = Eigen::Matrix<double, 4, 6>::Zero();
        for (int q = 0; q < rule.size(); ++q) {
          const auto rt = rt_values(
              mesh_, c, mesh_.map_to_physical(c, rule.points.col(q)));
          local.noalias() += rule.weights(q) * 6.0 * mesh_.cell_volume[c] *
                             rt.transpose() * curls;
        }
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 6; ++j)
            out.emplace_back(face_.cell_dofs[c][i], edge_.cell_dofs[c][j],
                             local(i, j));
      },
      trip);
  return from_triplets(face_.n_total, edge_.n_total, trip);
}

SpMat Assembler::div_face_to_cell() const {
  std::vector<Triplet> trip;
  for (int c = 0; c < mesh_.num_cells(); ++c) {
    const Eigen::Vector4d d = rt_divs(mesh_, c);
    for (int j = 0; j < 4; ++j)
      trip.emplace_back(c, face_.cell_dofs[c][j], d(j) * mesh_.cell_volume[c]);
  }
  return from_triplets(cell_.n_total, face_.n_total, trip);
}

SpMat Assembler::div_velocity_to_pressure() const {
  const auto rule = tet_rule(kDegDivVelPres);
  std::vector<Triplet> trip;
  assemble_cells(
      mesh_.num_cells(),
      [&](int c, std::vector<Triplet>& out) {
        Eigen::Matrix<double, 4, 15> local = Eigen::Matrix<double, 4, 15>::Zero();
        for (int q = 0; q < rule.size(); ++q) {
          const Vec3 ref = rule.points.col(q);
          const double w = rule.weights(q) * 6.0 * mesh_.cell_volume[c];
          const auto g = mini_scalar_gradients(mesh_.cell_grad_lambda[c], ref);
          const Eigen::Vector4d l = bary(ref);
          for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 5; ++j)
              for (int d = 0; d < 3; ++d)
                local(i, 3 * j + d) += w * l(i) * g(d, j);  // div(phi_j e_d)
        }
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 15; ++j)
            out.emplace_back(pres_.cell_dofs[c][i], vel_.cell_dofs[c][j],
                             local(i, j));
      },
      trip);
  return from_triplets(pres_.n_total, vel_.n_total, trip);
}

SpMat Assembler::bform(const FieldCoefficients& w) const {
  if (w.kind != SpaceKind::MiniVelocity)
    throw std::invalid_argument("bform: w must be a velocity field");
  const auto rule = tet_rule(kDegBform);
  std::vector<Triplet> trip;
  assemble_cells(
      mesh_.num_cells(),
      [&](int c, std::vector<Triplet>& out) {
        const Eigen::Vector4d divs = rt_divs(mesh_, c);
        Eigen::Matrix<double, 4, 4> local = Eigen::Matrix<double, 4, 4>::Zero();
        for (int q = 0; q < rule.size(); ++q) {
          const Vec3 ref = rule.points.col(q);
          const double wq = rule.weights(q) * 6.0 * mesh_.cell_volume[c];
          const Vec3 wv = eval_velocity(mesh_, vel_, w.values, c, ref).value;
          const auto rt = rt_values(mesh_, c, mesh_.map_to_physical(c, ref));
          const Eigen::Vector4d wdotrt = rt.transpose() * wv;
          // 1/2 (w.F_i)(div m_j) - 1/2 (w.m_j)(div F_i)
          local.noalias() += 0.5 * wq * (wdotrt * divs.transpose() -
                                         divs * wdotrt.transpose());
        }
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j)
            out.emplace_back(face_.cell_dofs[c][i], face_.cell_dofs[c][j],
                             local(i, j));
      },
      trip);
  return from_triplets(face_.n_total, face_.n_total, trip);
}

SpMat Assembler::cross_velocity_face_to_edge(
    const FieldCoefficients& u_prev) const {
  const auto rule = tet_rule(kDegCrossUF);
  std::vector<Triplet> trip;
  assemble_cells(
      mesh_.num_cells(),
      [&](int c, std::vector<Triplet>& out) {
        Eigen::Matrix<double, 6, 4> local = Eigen::Matrix<double, 6, 4>::Zero();
        for (int q = 0; q < rule.size(); ++q) {
          const Vec3 ref = rule.points.col(q);
          const double wq = rule.weights(q) * 6.0 * mesh_.cell_volume[c];
          const Vec3 u = eval_velocity(mesh_, vel_, u_prev.values, c, ref).value;
          const auto rt = rt_values(mesh_, c, mesh_.map_to_physical(c, ref));
          const auto ne = ne_values(mesh_, c, bary(ref));
          for (int j = 0; j < 4; ++j) {
            const Vec3 uxm = u.cross(Vec3(rt.col(j)));
            local.col(j).noalias() += wq * ne.transpose() * uxm;
          }
        }
        for (int i = 0; i < 6; ++i)
          for (int j = 0; j < 4; ++j)
            out.emplace_back(edge_.cell_dofs[c][i], face_.cell_dofs[c][j],
                             local(i, j));
      },
      trip);
  return from_triplets(edge_.n_total, face_.n_total, trip);
}

SpMat Assembler::cross_trial_outer(const FieldCoefficients& m_prev,
                                   const FieldCoefficients& H) const {
  const auto rule = tet_rule(kDegCrossMMH);
  std::vector<Triplet> trip;
  assemble_cells(
      mesh_.num_cells(),
      [&](int c, std::vector<Triplet>& out) {
        Eigen::Matrix<double, 4, 4> local = Eigen::Matrix<double, 4, 4>::Zero();
        for (int q = 0; q < rule.size(); ++q) {
          const Vec3 ref = rule.points.col(q);
          const double wq = rule.weights(q) * 6.0 * mesh_.cell_volume[c];
          const auto rt = rt_values(mesh_, c, mesh_.map_to_physical(c, ref));
          const Vec3 mp = eval_rt(mesh_, face_, m_prev.values, c, rt);
          const Vec3 Hv = eval_rt(mesh_, face_, H.values, c, rt);
          const Vec3 inner = mp.cross(Hv);
          for (int j = 0; j < 4; ++j) {
            const Vec3 val = Vec3(rt.col(j)).cross(inner);
            local.col(j).noalias() += wq * rt.transpose() * val;
          }
        }
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j)
            out.emplace_back(face_.cell_dofs[c][i], face_.cell_dofs[c][j],
                             local(i, j));
      },
      trip);
  return from_triplets(face_.n_total, face_.n_total, trip);
}

SpMat Assembler::cross_trial_inner(const FieldCoefficients& m_prev,
                                   const FieldCoefficients& H) const {
  const auto rule = tet_rule(kDegCrossMMH);
  std::vector<Triplet> trip;
  assemble_cells(
      mesh_.num_cells(),
      [&](int c, std::vector<Triplet>& out) {
        Eigen::Matrix<double, 4, 4> local = Eigen::Matrix<double, 4, 4>::Zero();
        for (int q = 0; q < rule.size(); ++q) {
          const Vec3 ref = rule.points.col(q);
          const double wq = rule.weights(q) * 6.0 * mesh_.cell_volume[c];
          const auto rt = rt_values(mesh_, c, mesh_.map_to_physical(c, ref));
          const Vec3 mp = eval_rt(mesh_, face_, m_prev.values, c, rt);
          const Vec3 Hv = eval_rt(mesh_, face_, H.values, c, rt);
          for (int j = 0; j < 4; ++j) {
            const Vec3 val = mp.cross(Vec3(rt.col(j)).cross(Hv));
            local.col(j).noalias() += wq * rt.transpose() * val;
          }
        }
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j)
            out.emplace_back(face_.cell_dofs[c][i], face_.cell_dofs[c][j],
                             local(i, j));
      },
      trip);
  return from_triplets(face_.n_total, face_.n_total, trip);
}

Eigen::VectorXd Assembler::load_velocity(const VectorField& f, double t) const {
  const auto rule = tet_rule(kDegLoadVel);
  Eigen::VectorXd load = Eigen::VectorXd::Zero(vel_.n_total);
  for (int c = 0; c < mesh_.num_cells(); ++c)
    for (int q = 0; q < rule.size(); ++q) {
      const Vec3 ref = rule.points.col(q);
      const double wq = rule.weights(q) * 6.0 * mesh_.cell_volume[c];
      const Vec3 fv = f(mesh_.map_to_physical(c, ref), t);
      const auto vals = mini_scalar_values(ref);
      for (int i = 0; i < 5; ++i)
        for (int d = 0; d < 3; ++d)
          load(vel_.cell_dofs[c][3 * i + d]) += wq * vals(i) * fv(d);
    }
  return load;
}

Eigen::VectorXd Assembler::load_face(const VectorField& f, double t) const {
  const auto rule = tet_rule(kDegLoadFace);
  Eigen::VectorXd load = Eigen::VectorXd::Zero(face_.n_total);
  for (int c = 0; c < mesh_.num_cells(); ++c)
    for (int q = 0; q < rule.size(); ++q) {
      const Vec3 ref = rule.points.col(q);
      const double wq = rule.weights(q) * 6.0 * mesh_.cell_volume[c];
      const Vec3 x = mesh_.map_to_physical(c, ref);
      const Vec3 fv = f(x, t);
      const auto rt = rt_values(mesh_, c, x);
      for (int i = 0; i < 4; ++i)
        load(face_.cell_dofs[c][i]) += wq * rt.col(i).dot(fv);
    }
  return load;
}

Eigen::VectorXd Assembler::load_cell(const ScalarField& f, double t) const {
  const auto rule = tet_rule(kDegLoadCell);
  Eigen::VectorXd load = Eigen::VectorXd::Zero(cell_.n_total);
  for (int c = 0; c < mesh_.num_cells(); ++c)
    for (int q = 0; q < rule.size(); ++q) {
      const double wq = rule.weights(q) * 6.0 * mesh_.cell_volume[c];
      load(c) += wq * f(mesh_.map_to_physical(c, rule.points.col(q)), t);
    }
  return load;
}

Eigen::VectorXd Assembler::convection_load(
    const FieldCoefficients& u_prev) const {
  const auto rule = tet_rule(kDegConvection);
  Eigen::VectorXd load = Eigen::VectorXd::Zero(vel_.n_total);
  for (int c = 0; c < mesh_.num_cells(); ++c)
    for (int q = 0; q < rule.size(); ++q) {
      const Vec3 ref = rule.points.col(q);
      const double wq = rule.weights(q) * 6.0 * mesh_.cell_volume[c];
      const auto u = eval_velocity(mesh_, vel_, u_prev.values, c, ref);
      const Vec3 fv = u.value.cross(u.curl);
      const auto vals = mini_scalar_values(ref);
      for (int i = 0; i < 5; ++i)
        for (int d = 0; d < 3; ++d)
          load(vel_.cell_dofs[c][3 * i + d]) += wq * vals(i) * fv(d);
    }
  return load;
}

Eigen::VectorXd Assembler::torque_load(const FieldCoefficients& k,
                                       const FieldCoefficients& H) const {
  const auto rule = tet_rule(kDegTorque);
  Eigen::VectorXd load = Eigen::VectorXd::Zero(vel_.n_total);
  for (int c = 0; c < mesh_.num_cells(); ++c)
    for (int q = 0; q < rule.size(); ++q) {
      const Vec3 ref = rule.points.col(q);
      const double wq = rule.weights(q) * 6.0 * mesh_.cell_volume[c];
      const auto rt = rt_values(mesh_, c, mesh_.map_to_physical(c, ref));
      const Vec3 kv = eval_ne(mesh_, edge_, k.values, c, ne_values(mesh_, c, bary(ref)));
      const Vec3 Hv = eval_rt(mesh_, face_, H.values, c, rt);
      // (v x k, H) = v . (k x H)
      const Vec3 fv = kv.cross(Hv);
      const auto vals = mini_scalar_values(ref);
      for (int i = 0; i < 5; ++i)
        for (int d = 0; d < 3; ++d)
          load(vel_.cell_dofs[c][3 * i + d]) += wq * vals(i) * fv(d);
    }
  return load;
}

Eigen::VectorXd Assembler::bform_load(const FieldCoefficients& H,
                                      const FieldCoefficients& m) const {
  const auto rule = tet_rule(kDegBform);
  Eigen::VectorXd load = Eigen::VectorXd::Zero(vel_.n_total);
  for (int c = 0; c < mesh_.num_cells(); ++c) {
    const Eigen::Vector4d divs = rt_divs(mesh_, c);
    double divH = 0.0, divm = 0.0;
    for (int f = 0; f < 4; ++f) {
      divH += H.values(face_.cell_dofs[c][f]) * divs(f);
      divm += m.values(face_.cell_dofs[c][f]) * divs(f);
    }
    for (int q = 0; q < rule.size(); ++q) {
      const Vec3 ref = rule.points.col(q);
      const double wq = rule.weights(q) * 6.0 * mesh_.cell_volume[c];
      const auto rt = rt_values(mesh_, c, mesh_.map_to_physical(c, ref));
      const Vec3 Hv = eval_rt(mesh_, face_, H.values, c, rt);
      const Vec3 mv = eval_rt(mesh_, face_, m.values, c, rt);
      // b(v; H, m) = 1/2 (v.m) div H - 1/2 (v.H) div m
      const Vec3 fv = 0.5 * (divH * mv - divm * Hv);
      const auto vals = mini_scalar_values(ref);
      for (int i = 0; i < 5; ++i)
        for (int d = 0; d < 3; ++d)
          load(vel_.cell_dofs[c][3 * i + d]) += wq * vals(i) * fv(d);
    }
  }
  return load;
}

Eigen::VectorXd Assembler::quad_load(const FieldCoefficients& m_prev,
                                     const FieldCoefficients& H) const {
  const auto rule = tet_rule(kDegCrossMMH);
  Eigen::VectorXd load = Eigen::VectorXd::Zero(face_.n_total);
  for (int c = 0; c < mesh_.num_cells(); ++c)
    for (int q = 0; q < rule.size(); ++q) {
      const Vec3 ref = rule.points.col(q);
      const double wq = rule.weights(q) * 6.0 * mesh_.cell_volume[c];
      const auto rt = rt_values(mesh_, c, mesh_.map_to_physical(c, ref));
      const Vec3 mp = eval_rt(mesh_, face_, m_prev.values, c, rt);
      const Vec3 Hv = eval_rt(mesh_, face_, H.values, c, rt);
      const Vec3 fv = mp.cross(mp.cross(Hv));
      for (int i = 0; i < 4; ++i)
        load(face_.cell_dofs[c][i]) += wq * rt.col(i).dot(fv);
    }
  return load;
}

Eigen::VectorXd Assembler::basis_measures(SpaceKind kind) const {
  const DofMap& dm = dofmap(kind);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(dm.n_total);
  switch (kind) {
    case SpaceKind::PressureP1:
      for (int c = 0; c < mesh_.num_cells(); ++c)
        for (int i = 0; i < 4; ++i)
          w(mesh_.cells[c][i]) += mesh_.cell_volume[c] / 4.0;
      break;
    case SpaceKind::Cell0:
      for (int c = 0; c < mesh_.num_cells(); ++c) w(c) = mesh_.cell_volume[c];
      break;
    default:
      throw std::invalid_argument("basis_measures: zero-mean spaces only");
  }
  return w;
}

}  // namespace ferroflow
