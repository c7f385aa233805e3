#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "ferroflow/mesh.hpp"

using namespace ferroflow;

TEST_CASE("n=1 entity counts match the 6-tet Kuhn split") {
  const Mesh mesh = build_uniform_mesh(1);
  CHECK(mesh.num_vertices() == 8);
  CHECK(mesh.num_edges() == 19);
  CHECK(mesh.num_faces() == 18);
  CHECK(mesh.num_cells() == 6);
}

TEST_CASE("Euler characteristic and counts for n in {1,2,3}") {
  for (int n : {1, 2, 3}) {
    const Mesh mesh = build_uniform_mesh(n);
    CHECK(mesh.num_vertices() == (n + 1) * (n + 1) * (n + 1));
    CHECK(mesh.num_cells() == 6 * n * n * n);
    CHECK(mesh.num_vertices() - mesh.num_edges() + mesh.num_faces() -
              mesh.num_cells() ==
          1);
  }
}

TEST_CASE("cell volumes positive and sum to 1") {
  for (int n : {1, 2, 3}) {
    const Mesh mesh = build_uniform_mesh(n);
    double total = 0.0;
    for (int c = 0; c < mesh.num_cells(); ++c) {
      CHECK(mesh.cell_volume[c] > 0.0);
      total += mesh.cell_volume[c];
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    // congruent tets on the uniform mesh
    CHECK(mesh.cell_volume[0] == doctest::Approx(1.0 / (6.0 * n * n * n)));
  }
}

TEST_CASE("mesh size h is the sub-cube diagonal sqrt(3)/n") {
  for (int n : {1, 2, 4}) {
    const Mesh mesh = build_uniform_mesh(n);
    CHECK(mesh.h() == doctest::Approx(std::sqrt(3.0) / n).epsilon(1e-14));
  }
}

TEST_CASE("n=1 boundary flags: 12 boundary and 6 interior faces") {
  const Mesh mesh = build_uniform_mesh(1);
  int boundary = 0;
  for (int f = 0; f < mesh.num_faces(); ++f)
    if (mesh.face_on_boundary[f]) ++boundary;
  CHECK(boundary == 12);
  CHECK(mesh.num_faces() - boundary == 6);
  // n=1: every vertex is a cube corner, and all edges except the main
  // diagonal lie on the boundary
  int bdry_edges = 0;
  for (int e = 0; e < mesh.num_edges(); ++e)
    if (mesh.edge_on_boundary[e]) ++bdry_edges;
  CHECK(bdry_edges == 18);
  for (int v = 0; v < mesh.num_vertices(); ++v)
    CHECK(mesh.vertex_on_boundary[v]);
}

TEST_CASE("boundary flags match coordinates on n=2") {
  const Mesh mesh = build_uniform_mesh(2);
  auto on_boundary = [](const Vec3& p) {
    for (int d = 0; d < 3; ++d)
      if (std::abs(p[d]) < 1e-14 || std::abs(p[d] - 1.0) < 1e-14) return true;
    return false;
  };
  for (int v = 0; v < mesh.num_vertices(); ++v)
    CHECK(mesh.vertex_on_boundary[v] == on_boundary(mesh.vertices[v]));
  for (int f = 0; f < mesh.num_faces(); ++f) {
    bool all = true;
    Vec3 centroid = Vec3::Zero();
    for (int i = 0; i < 3; ++i) {
      all = all && on_boundary(mesh.vertices[mesh.faces[f][i]]);
      centroid += mesh.vertices[mesh.faces[f][i]] / 3.0;
    }
    CHECK(mesh.face_on_boundary[f] == (all && on_boundary(centroid)));
  }
}

TEST_CASE("entity tuples ascend and incidence signs are consistent") {
  const Mesh mesh = build_uniform_mesh(2);
  for (const auto& e : mesh.edges) CHECK(e[0] < e[1]);
  for (const auto& f : mesh.faces) {
    CHECK(f[0] < f[1]);
    CHECK(f[1] < f[2]);
  }
  // interior faces: two incident cells with opposite outward normals
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const auto [cA, cB] = mesh.face_cells[f];
    if (mesh.face_on_boundary[f]) {
      CHECK(cB == -1);
      continue;
    }
    REQUIRE(cB >= 0);
    int sA = 0, sB = 0;
    for (int lf = 0; lf < 4; ++lf) {
      if (mesh.cell_to_face[cA][lf] == f) sA = mesh.cell_face_sign[cA][lf];
      if (mesh.cell_to_face[cB][lf] == f) sB = mesh.cell_face_sign[cB][lf];
    }
    CHECK(sA * sB == -1);
  }
}

TEST_CASE("affine map reproduces vertices; jacobian columns are edge vectors") {
  const Mesh mesh = build_uniform_mesh(2);
  const Vec3 ref_vertices[4] = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (int c : {0, 7, mesh.num_cells() - 1}) {
    for (int i = 0; i < 4; ++i) {
      const Vec3 mapped = mesh.map_to_physical(c, ref_vertices[i]);
      CHECK((mapped - mesh.vertices[mesh.cells[c][i]]).norm() < 1e-14);
    }
    const Vec3 p0 = mesh.vertices[mesh.cells[c][0]];
    for (int j = 0; j < 3; ++j) {
      const Vec3 edge = mesh.vertices[mesh.cells[c][j + 1]] - p0;
      CHECK((mesh.cell_jacobian[c].col(j) - edge).norm() < 1e-14);
    }
  }
}

TEST_CASE("barycentric gradients are the inverse-transpose jacobian rows") {
  const Mesh mesh = build_uniform_mesh(2);
  for (int c : {0, 11}) {
    // lambda_i is affine with lambda_i(vertex_j) = delta_ij; check by
    // finite differences of the affine expression lambda_0 = 1 - sum ref
    const auto& G = mesh.cell_grad_lambda[c];
    // grad lambda sums to zero (partition of unity)
    CHECK((G.col(0) + G.col(1) + G.col(2) + G.col(3)).norm() < 1e-13);
    // J^T grad lambda_{j+1} = e_j
    for (int j = 0; j < 3; ++j) {
      const Vec3 r = mesh.cell_jacobian[c].transpose() * G.col(j + 1);
      CHECK((r - Vec3::Unit(j)).norm() < 1e-13);
    }
  }
}

TEST_CASE("face geometry: areas, unit normals, centroids") {
  const Mesh mesh = build_uniform_mesh(1);
  double area_total = 0.0;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    CHECK(mesh.face_area(f) > 0.0);
    CHECK(mesh.face_normal(f).norm() == doctest::Approx(1.0).epsilon(1e-14));
    Vec3 centroid = Vec3::Zero();
    for (int i = 0; i < 3; ++i)
      centroid += mesh.vertices[mesh.faces[f][i]] / 3.0;
    CHECK((mesh.face_centroid(f) - centroid).norm() < 1e-14);
    if (mesh.face_on_boundary[f]) area_total += mesh.face_area(f);
  }
  CHECK(area_total == doctest::Approx(6.0).epsilon(1e-13));  // cube surface
}

TEST_CASE("build rejects n < 1") {
  CHECK_THROWS(build_uniform_mesh(0));
  CHECK_THROWS(build_uniform_mesh(-3));
}

TEST_CASE("deterministic construction") {
  const Mesh a = build_uniform_mesh(2);
  const Mesh b = build_uniform_mesh(2);
  CHECK(a.cells == b.cells);
  CHECK(a.edges == b.edges);
  CHECK(a.faces == b.faces);
  CHECK(a.cell_to_edge == b.cell_to_edge);
  CHECK(a.cell_face_sign == b.cell_face_sign);
}
