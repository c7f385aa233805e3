#include "ferroflow/spaces.hpp"

#include <cmath>
#include <stdexcept>

#include "ferroflow/quadrature.hpp"

namespace ferroflow {

namespace {

Eigen::Vector4d barycentric(const Vec3& ref) {
  return {1.0 - ref.x() - ref.y() - ref.z(), ref.x(), ref.y(), ref.z()};
}

}  // namespace

Eigen::Matrix<double, 1, 5> mini_scalar_values(const Vec3& ref) {
  const Eigen::Vector4d l = barycentric(ref);
  Eigen::Matrix<double, 1, 5> v;
  v << l(0), l(1), l(2), l(3), 256.0 * l(0) * l(1) * l(2) * l(3);
  return v;
}

Eigen::Matrix<double, 3, 5> mini_scalar_gradients(
    const Eigen::Matrix<double, 3, 4>& G, const Vec3& ref) {
  const Eigen::Vector4d l = barycentric(ref);
  Eigen::Matrix<double, 3, 5> g;
  g.block<3, 4>(0, 0) = G;
  Vec3 gb = Vec3::Zero();
  for (int i = 0; i < 4; ++i) {
    double prod = 1.0;
    for (int j = 0; j < 4; ++j)
      if (j != i) prod *= l(j);
    gb += prod * G.col(i);
  }
  g.col(4) = 256.0 * gb;
  return g;
}

DofMap build_dofmap(const Mesh& mesh, SpaceKind kind) {
  DofMap dm;
  dm.kind = kind;
  const int nc = mesh.num_cells();
  dm.cell_dofs.resize(nc);
  dm.cell_signs.resize(nc);

  switch (kind) {
    case SpaceKind::MiniVelocity: {
      const int nv = mesh.num_vertices();
      dm.n_total = 3 * nv + 3 * nc;
      dm.dofs_per_cell = 15;
      for (int c = 0; c < nc; ++c) {
        auto& dofs = dm.cell_dofs[c];
        dofs.resize(15);
        for (int i = 0; i < 4; ++i)
          for (int d = 0; d < 3; ++d) dofs[3 * i + d] = 3 * mesh.cells[c][i] + d;
        for (int d = 0; d < 3; ++d) dofs[12 + d] = 3 * nv + 3 * c + d;
        dm.cell_signs[c].assign(15, 1.0);
      }
      dm.free_index.assign(dm.n_total, -1);
      int next = 0;
      for (int v = 0; v < nv; ++v)
        if (!mesh.vertex_on_boundary[v])
          for (int d = 0; d < 3; ++d) dm.free_index[3 * v + d] = next++;
      for (int c = 0; c < nc; ++c)
        for (int d = 0; d < 3; ++d) dm.free_index[3 * nv + 3 * c + d] = next++;
      dm.n_free = next;
      break;
    }
    case SpaceKind::PressureP1: {
      dm.n_total = mesh.num_vertices();
      dm.dofs_per_cell = 4;
      dm.zero_mean = true;
      for (int c = 0; c < nc; ++c) {
        dm.cell_dofs[c] = {mesh.cells[c][0], mesh.cells[c][1],
                           mesh.cells[c][2], mesh.cells[c][3]};
        dm.cell_signs[c].assign(4, 1.0);
      }
      dm.free_index.resize(dm.n_total);
      for (int i = 0; i < dm.n_total; ++i) dm.free_index[i] = i;
      dm.n_free = dm.n_total;
      break;
    }
    case SpaceKind::Edge0: {
      dm.n_total = mesh.num_edges();
      dm.dofs_per_cell = 6;
      for (int c = 0; c < nc; ++c) {
        dm.cell_dofs[c].assign(mesh.cell_to_edge[c].begin(),
                               mesh.cell_to_edge[c].end());
        dm.cell_signs[c].resize(6);
        for (int e = 0; e < 6; ++e)
          dm.cell_signs[c][e] = mesh.cell_edge_sign[c][e];
      }
      dm.free_index.resize(dm.n_total);
      for (int e = 0; e < dm.n_total; ++e) dm.free_index[e] = e;
      dm.n_free = dm.n_total;
      break;
    }
    case SpaceKind::Face0: {
      dm.n_total = mesh.num_faces();
      dm.dofs_per_cell = 4;
      for (int c = 0; c < nc; ++c) {
        dm.cell_dofs[c].assign(mesh.cell_to_face[c].begin(),
                               mesh.cell_to_face[c].end());
        dm.cell_signs[c].resize(4);
        for (int f = 0; f < 4; ++f)
          dm.cell_signs[c][f] = mesh.cell_face_sign[c][f];
      }
      dm.free_index.assign(dm.n_total, -1);
      int next = 0;
      for (int f = 0; f < dm.n_total; ++f)
        if (!mesh.face_on_boundary[f]) dm.free_index[f] = next++;
      dm.n_free = next;
      break;
    }
    case SpaceKind::Cell0: {
      dm.n_total = nc;
      dm.dofs_per_cell = 1;
      dm.zero_mean = true;
      for (int c = 0; c < nc; ++c) {
        dm.cell_dofs[c] = {c};
        dm.cell_signs[c] = {1.0};
      }
      dm.free_index.resize(dm.n_total);
      for (int i = 0; i < dm.n_total; ++i) dm.free_index[i] = i;
      dm.n_free = dm.n_total;
      break;
    }
  }
  return dm;
}

Eigen::MatrixXd shape_values(const Mesh& mesh, SpaceKind kind, int cell,
                             const Vec3& ref) {
  const auto& G = mesh.cell_grad_lambda[cell];
  const Eigen::Vector4d l = barycentric(ref);
  switch (kind) {
    case SpaceKind::MiniVelocity: {
      const auto s = mini_scalar_values(ref);
      Eigen::MatrixXd v = Eigen::MatrixXd::Zero(3, 15);
      for (int i = 0; i < 5; ++i)
        for (int d = 0; d < 3; ++d) v(d, 3 * i + d) = s(i);
      return v;
    }
    case SpaceKind::PressureP1: {
      Eigen::MatrixXd v(1, 4);
      v << l(0), l(1), l(2), l(3);
      return v;
    }
    case SpaceKind::Edge0: {
      Eigen::MatrixXd v(3, 6);
      for (int e = 0; e < 6; ++e) {
        const int a = kLocalEdges[e][0], b = kLocalEdges[e][1];
        const double s = mesh.cell_edge_sign[cell][e];
        v.col(e) = s * (l(a) * G.col(b) - l(b) * G.col(a));
      }
      return v;
    }
    case SpaceKind::Face0: {
      const Vec3 x = mesh.map_to_physical(cell, ref);
      const double vol = mesh.cell_volume[cell];
      Eigen::MatrixXd v(3, 4);
      for (int f = 0; f < 4; ++f) {
        const double s = mesh.cell_face_sign[cell][f];
        v.col(f) = s / (3.0 * vol) * (x - mesh.vertices[mesh.cells[cell][f]]);
      }
      return v;
    }
    case SpaceKind::Cell0:
      return Eigen::MatrixXd::Ones(1, 1);
  }
  throw std::logic_error("shape_values: unknown space");
}

Eigen::MatrixXd shape_derivatives(const Mesh& mesh, SpaceKind kind, int cell,
                                  const Vec3& ref) {
  const auto& G = mesh.cell_grad_lambda[cell];
  switch (kind) {
    case SpaceKind::MiniVelocity: {
      const auto g = mini_scalar_gradients(G, ref);
      Eigen::MatrixXd d = Eigen::MatrixXd::Zero(9, 15);
      for (int i = 0; i < 5; ++i)
        for (int comp = 0; comp < 3; ++comp)
          for (int c = 0; c < 3; ++c) d(3 * comp + c, 3 * i + comp) = g(c, i);
      return d;
    }
    case SpaceKind::PressureP1:
      return G;
    case SpaceKind::Edge0: {
      Eigen::MatrixXd d(3, 6);
      for (int e = 0; e < 6; ++e) {
        const int a = kLocalEdges[e][0], b = kLocalEdges[e][1];
        const double s = mesh.cell_edge_sign[cell][e];
        d.col(e) = s * 2.0 * G.col(a).cross(G.col(b));
      }
      return d;
    }
    case SpaceKind::Face0: {
      const double vol = mesh.cell_volume[cell];
      Eigen::MatrixXd d(1, 4);
      for (int f = 0; f < 4; ++f)
        d(0, f) = mesh.cell_face_sign[cell][f] / vol;
      return d;
    }
    case SpaceKind::Cell0:
      return Eigen::MatrixXd::Zero(1, 1);
  }
  throw std::logic_error("shape_derivatives: unknown space");
}

FieldCoefficients interpolate(const Mesh& mesh, const DofMap& dm,
                              const VectorField& f, double t) {
  FieldCoefficients out{dm.kind, Eigen::VectorXd::Zero(dm.n_total)};
  switch (dm.kind) {
    case SpaceKind::MiniVelocity: {
      for (int v = 0; v < mesh.num_vertices(); ++v)
        out.values.segment<3>(3 * v) = f(mesh.vertices[v], t);
      break;  // bubble DOFs stay zero
    }
    case SpaceKind::Face0: {
      const auto rule = tri_rule(8);
      for (int fc = 0; fc < mesh.num_faces(); ++fc) {
        const auto& tri = mesh.faces[fc];
        const Vec3 p0 = mesh.vertices[tri[0]];
        const Vec3 e1 = mesh.vertices[tri[1]] - p0;
        const Vec3 e2 = mesh.vertices[tri[2]] - p0;
        const Vec3 n = mesh.face_normal(fc);
        const double jac = e1.cross(e2).norm();  // dS = jac * dref (ref area 1/2)
        double flux = 0.0;
        for (int q = 0; q < rule.weights.size(); ++q) {
          const Vec3 x = p0 + rule.points(0, q) * e1 + rule.points(1, q) * e2;
          flux += rule.weights(q) * jac * f(x, t).dot(n);
        }
        out.values(fc) = flux;
      }
      break;
    }
    case SpaceKind::Edge0: {
      const auto rule = line_rule(8);
      for (int e = 0; e < mesh.num_edges(); ++e) {
        const Vec3 p0 = mesh.vertices[mesh.edges[e][0]];
        const Vec3 d = mesh.vertices[mesh.edges[e][1]] - p0;
        double circ = 0.0;
        for (int q = 0; q < rule.weights.size(); ++q)
          circ += rule.weights(q) * f(p0 + rule.points(q) * d, t).dot(d);
        out.values(e) = circ;
      }
      break;
    }
    default:
      throw std::invalid_argument("interpolate: scalar space, use interpolate_scalar");
  }
  return out;
}

FieldCoefficients interpolate_scalar(const Mesh& mesh, const DofMap& dm,
                                     const ScalarField& f, double t) {
  FieldCoefficients out{dm.kind, Eigen::VectorXd::Zero(dm.n_total)};
  switch (dm.kind) {
    case SpaceKind::PressureP1: {
      for (int v = 0; v < mesh.num_vertices(); ++v)
        out.values(v) = f(mesh.vertices[v], t);
      // shift to zero mean
      Eigen::VectorXd w = Eigen::VectorXd::Zero(dm.n_total);
      for (int c = 0; c < mesh.num_cells(); ++c)
        for (int i = 0; i < 4; ++i)
          w(mesh.cells[c][i]) += mesh.cell_volume[c] / 4.0;
      out.values.array() -= out.values.dot(w) / w.sum();
      break;
    }
    case SpaceKind::Cell0: {
      const auto rule = tet_rule(6);
      double total = 0.0, volsum = 0.0;
      for (int c = 0; c < mesh.num_cells(); ++c) {
        const double scale = 6.0 * mesh.cell_volume[c];
        double cellint = 0.0;
        for (int q = 0; q < rule.size(); ++q)
          cellint += rule.weights(q) * scale *
                     f(mesh.map_to_physical(c, rule.points.col(q)), t);
        out.values(c) = cellint / mesh.cell_volume[c];
        total += cellint;
        volsum += mesh.cell_volume[c];
      }
      out.values.array() -= total / volsum;
      break;
    }
    default:
      throw std::invalid_argument("interpolate_scalar: vector space");
  }
  return out;
}

int locate_cell(const Mesh& mesh, const Vec3& point, Vec3& ref) {
  constexpr double tol = 1e-10;
  if ((point.array() < -tol).any() || (point.array() > 1.0 + tol).any())
    throw std::domain_error("locate_cell: point outside [0,1]^3");
  const int n = mesh.n;
  auto clampi = [n](double x) {
    return std::min(n - 1, std::max(0, static_cast<int>(std::floor(x))));
  };
  const int i = clampi(point.x() * n), j = clampi(point.y() * n),
            k = clampi(point.z() * n);
  const int base = 6 * (i + n * (j + n * k));
  for (int c = base; c < base + 6; ++c) {
    const Vec3 r = mesh.cell_jacobian[c].inverse() *
                   (point - mesh.vertices[mesh.cells[c][0]]);
    if (r.minCoeff() >= -tol && r.sum() <= 1.0 + tol) {
      ref = r;
      return c;
    }
  }
  // roundoff at a cube boundary: fall back to a full scan
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const Vec3 r = mesh.cell_jacobian[c].inverse() *
                   (point - mesh.vertices[mesh.cells[c][0]]);
    if (r.minCoeff() >= -tol && r.sum() <= 1.0 + tol) {
      ref = r;
      return c;
    }
  }
  throw std::domain_error("locate_cell: no containing cell found");
}

Vec3 eval_field(const Mesh& mesh, const DofMap& dm,
                const FieldCoefficients& coeffs, const Vec3& point) {
  Vec3 ref;
  const int c = locate_cell(mesh, point, ref);
  const Eigen::MatrixXd v = shape_values(mesh, dm.kind, c, ref);
  Vec3 out = Vec3::Zero();
  for (int i = 0; i < dm.dofs_per_cell; ++i)
    out += coeffs.values(dm.cell_dofs[c][i]) * v.col(i);
  return out;
}

double eval_scalar_field(const Mesh& mesh, const DofMap& dm,
                         const FieldCoefficients& coeffs, const Vec3& point) {
  Vec3 ref;
  const int c = locate_cell(mesh, point, ref);
  const Eigen::MatrixXd v = shape_values(mesh, dm.kind, c, ref);
  double out = 0.0;
  for (int i = 0; i < dm.dofs_per_cell; ++i)
    out += coeffs.values(dm.cell_dofs[c][i]) * v(0, i);
  return out;
}

Eigen::SparseMatrix<double> coeff_curl(const Mesh& mesh, const DofMap& edge,
                                       const DofMap& face) {
  Eigen::SparseMatrix<double> C(face.n_total, edge.n_total);
  C.reserve(Eigen::VectorXi::Constant(edge.n_total, 16));
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& G = mesh.cell_grad_lambda[c];
    for (int e = 0; e < 6; ++e) {
      const int a = kLocalEdges[e][0], b = kLocalEdges[e][1];
      const Vec3 curl = mesh.cell_edge_sign[c][e] * 2.0 *
                        Vec3(G.col(a)).cross(Vec3(G.col(b)));
      for (int lf = 0; lf < 4; ++lf) {
        const int f = mesh.cell_to_face[c][lf];
        // shared faces receive the same flux from both cells
        C.coeffRef(f, mesh.cell_to_edge[c][e]) =
            curl.dot(mesh.face_normal(f)) * mesh.face_area(f);
      }
    }
  }
  C.makeCompressed();
  return C;
}

Eigen::SparseMatrix<double> coeff_div(const Mesh& mesh, const DofMap& face,
                                      const DofMap& cell) {
  Eigen::SparseMatrix<double> D(cell.n_total, face.n_total);
  D.reserve(Eigen::VectorXi::Constant(face.n_total, 2));
  for (int c = 0; c < mesh.num_cells(); ++c)
    for (int lf = 0; lf < 4; ++lf)
      D.coeffRef(c, mesh.cell_to_face[c][lf]) =
          mesh.cell_face_sign[c][lf] / mesh.cell_volume[c];
  D.makeCompressed();
  return D;
}

}  // namespace ferroflow
