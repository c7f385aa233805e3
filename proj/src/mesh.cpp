#include "ferroflow/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace ferroflow {

namespace {

// The 6 Kuhn tetrahedra of a sub-cube: cumulative axis walks from the
// low corner to the high corner, one per permutation of (x,y,z).
constexpr std::array<std::array<int, 3>, 6> kAxisPerms = {
    {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};

}  // namespace

double Mesh::h() const { return std::sqrt(3.0) / n; }

double Mesh::face_area(int f) const {
  const auto& t = faces[f];
  const Vec3 a = vertices[t[1]] - vertices[t[0]];
  const Vec3 b = vertices[t[2]] - vertices[t[0]];
  return 0.5 * a.cross(b).norm();
}

Vec3 Mesh::face_normal(int f) const {
  const auto& t = faces[f];
  const Vec3 a = vertices[t[1]] - vertices[t[0]];
  const Vec3 b = vertices[t[2]] - vertices[t[0]];
  return a.cross(b).normalized();
}

Vec3 Mesh::face_centroid(int f) const {
  const auto& t = faces[f];
  return (vertices[t[0]] + vertices[t[1]] + vertices[t[2]]) / 3.0;
}

Vec3 Mesh::map_to_physical(int cell, const Vec3& ref) const {
  return vertices[cells[cell][0]] + cell_jacobian[cell] * ref;
}

int Mesh::edge_orientation(int cell, int le) const {
  if (cell < 0 || cell >= num_cells() || le < 0 || le >= 6)
    throw std::out_of_range("edge_orientation: invalid cell or local edge");
  return cell_edge_sign[cell][le];
}

int Mesh::face_orientation(int cell, int lf) const {
  if (cell < 0 || cell >= num_cells() || lf < 0 || lf >= 4)
    throw std::out_of_range("face_orientation: invalid cell or local face");
  return cell_face_sign[cell][lf];
}

Mesh build_uniform_mesh(int n) {
  if (n < 1) throw std::invalid_argument("build_uniform_mesh: n must be >= 1");

  Mesh m;
  m.n = n;
  const int np = n + 1;
  auto vid = [np](int i, int j, int k) { return i + np * (j + np * k); };

  m.vertices.resize(static_cast<size_t>(np) * np * np);
  for (int k = 0; k < np; ++k)
    for (int j = 0; j < np; ++j)
      for (int i = 0; i < np; ++i)
        m.vertices[vid(i, j, k)] =
            Vec3(double(i) / n, double(j) / n, double(k) / n);

  m.cells.reserve(static_cast<size_t>(6) * n * n * n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        for (const auto& perm : kAxisPerms) {
          std::array<int, 3> c = {i, j, k};
          std::array<int, 4> cell;
          cell[0] = vid(c[0], c[1], c[2]);
          for (int s = 0; s < 3; ++s) {
            ++c[perm[s]];
            cell[s + 1] = vid(c[0], c[1], c[2]);
          }
          // enforce positive signed volume
          const Vec3 e1 = m.vertices[cell[1]] - m.vertices[cell[0]];
          const Vec3 e2 = m.vertices[cell[2]] - m.vertices[cell[0]];
          const Vec3 e3 = m.vertices[cell[3]] - m.vertices[cell[0]];
          if (e1.cross(e2).dot(e3) < 0.0) std::swap(cell[1], cell[2]);
          m.cells.push_back(cell);
        }

  const int nc = m.num_cells();

  // geometry
  m.cell_volume.resize(nc);
  m.cell_jacobian.resize(nc);
  m.cell_grad_lambda.resize(nc);
  for (int c = 0; c < nc; ++c) {
    const auto& cl = m.cells[c];
    Mat3 J;
    for (int s = 0; s < 3; ++s)
      J.col(s) = m.vertices[cl[s + 1]] - m.vertices[cl[0]];
    const double det = J.determinant();
    if (det <= 0.0)
      throw std::runtime_error("build_uniform_mesh: degenerate cell");
    m.cell_jacobian[c] = J;
    m.cell_volume[c] = det / 6.0;
    // rows of J^{-1} are grad lambda_{1..3}; lambda_0 = 1 - sum
    const Mat3 Jit = J.inverse().transpose();
    Eigen::Matrix<double, 3, 4> G;
    G.block<3, 3>(0, 1) = Jit;
    G.col(0) = -(G.col(1) + G.col(2) + G.col(3));
    m.cell_grad_lambda[c] = G;
  }

  // edges and faces with global ascending orientation
  std::map<std::array<int, 2>, int> edge_id;
  std::map<std::array<int, 3>, int> face_id;
  m.cell_to_edge.resize(nc);
  m.cell_to_face.resize(nc);
  m.cell_edge_sign.resize(nc);
  m.cell_face_sign.resize(nc);

  for (int c = 0; c < nc; ++c) {
    const auto& cl = m.cells[c];
    for (int le = 0; le < 6; ++le) {
      int a = cl[kLocalEdges[le][0]], b = cl[kLocalEdges[le][1]];
      const int sign = a < b ? 1 : -1;
      std::array<int, 2> key = {std::min(a, b), std::max(a, b)};
      auto [it, inserted] = edge_id.try_emplace(key, -1);
      if (inserted) {
        it->second = static_cast<int>(m.edges.size());
        m.edges.push_back(key);
      }
      m.cell_to_edge[c][le] = it->second;
      m.cell_edge_sign[c][le] = sign;
    }
    for (int lf = 0; lf < 4; ++lf) {
      std::array<int, 3> key = {cl[kLocalFaces[lf][0]], cl[kLocalFaces[lf][1]],
                                cl[kLocalFaces[lf][2]]};
      std::sort(key.begin(), key.end());
      auto [it, inserted] = face_id.try_emplace(key, -1);
      if (inserted) {
        it->second = static_cast<int>(m.faces.size());
        m.faces.push_back(key);
        m.face_cells.push_back({-1, -1});
      }
      const int f = it->second;
      m.cell_to_face[c][lf] = f;
      if (m.face_cells[f][0] < 0)
        m.face_cells[f][0] = c;
      else
        m.face_cells[f][1] = c;
      // outward normal points away from the opposite vertex
      const Vec3 nrm = m.face_normal(f);
      const Vec3 d = m.face_centroid(f) - m.vertices[cl[lf]];
      m.cell_face_sign[c][lf] = nrm.dot(d) > 0.0 ? 1 : -1;
    }
  }

  // boundary flags from face incidence
  m.face_on_boundary.assign(m.num_faces(), false);
  m.edge_on_boundary.assign(m.num_edges(), false);
  m.vertex_on_boundary.assign(m.num_vertices(), false);
  for (int f = 0; f < m.num_faces(); ++f) {
    if (m.face_cells[f][1] >= 0) continue;
    m.face_on_boundary[f] = true;
    const auto& t = m.faces[f];
    for (int v : t) m.vertex_on_boundary[v] = true;
    for (const auto pair : {std::array<int, 2>{t[0], t[1]},
                            std::array<int, 2>{t[0], t[2]},
                            std::array<int, 2>{t[1], t[2]}}) {
      m.edge_on_boundary[edge_id.at(pair)] = true;
    }
  }

  return m;
}

}  // namespace ferroflow
