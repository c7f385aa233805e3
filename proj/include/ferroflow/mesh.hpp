#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <vector>

namespace ferroflow {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Uniform tetrahedral mesh of the unit cube. Each of the n^3 sub-cubes is
/// split into 6 tetrahedra sharing the (0,0,0)->(1,1,1) sub-cube diagonal
/// (Kuhn subdivision). All entities carry a deterministic global orientation:
/// edges run from the lower to the higher vertex index, faces are stored as
/// ascending vertex triples with the normal given by the right-hand rule on
/// that ordering.
///
/// Immutable after construction; safe to share across threads.
struct Mesh {
  int n = 0;                                   // subdivisions per axis
  std::vector<Vec3> vertices;                  // (n+1)^3 lattice points
  std::vector<std::array<int, 4>> cells;       // positive signed volume
  std::vector<std::array<int, 2>> edges;       // lo < hi
  std::vector<std::array<int, 3>> faces;       // ascending triple
  std::vector<std::array<int, 6>> cell_to_edge;
  std::vector<std::array<int, 4>> cell_to_face;   // local face i opposite vertex i
  std::vector<std::array<int, 6>> cell_edge_sign; // local lo->hi vs global lo->hi
  std::vector<std::array<int, 4>> cell_face_sign; // outward normal vs global normal
  std::vector<std::array<int, 2>> face_cells;     // incident cells, -1 if none
  std::vector<bool> vertex_on_boundary;
  std::vector<bool> edge_on_boundary;
  std::vector<bool> face_on_boundary;

  // per-cell affine geometry, precomputed
  std::vector<double> cell_volume;
  std::vector<Mat3> cell_jacobian;          // columns = edge vectors from vertex 0
  std::vector<Eigen::Matrix<double, 3, 4>> cell_grad_lambda; // physical barycentric gradients

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int num_faces() const { return static_cast<int>(faces.size()); }
  int num_cells() const { return static_cast<int>(cells.size()); }

  /// Longest cell diameter: the sub-cube diagonal sqrt(3)/n.
  double h() const;

  double face_area(int f) const;
  Vec3 face_normal(int f) const;   // unit normal of the global orientation
  Vec3 face_centroid(int f) const;

  /// Map a reference-tetrahedron point to physical coordinates.
  Vec3 map_to_physical(int cell, const Vec3& ref) const;

  /// Sign relating the cell-local orientation of local edge le to the
  /// global (ascending-index) orientation.
  int edge_orientation(int cell, int le) const;
  /// Sign relating the cell-outward normal of local face lf to the global
  /// face normal.
  int face_orientation(int cell, int lf) const;
};

/// Build the n x n x n Kuhn-subdivided mesh of [0,1]^3. Throws on n < 1.
Mesh build_uniform_mesh(int n);

/// Local edge vertex pairs and local face vertex triples of the reference
/// ordering used throughout (face i is opposite vertex i).
inline constexpr std::array<std::array<int, 2>, 6> kLocalEdges = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
inline constexpr std::array<std::array<int, 3>, 4> kLocalFaces = {
    {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}}};

}  // namespace ferroflow
