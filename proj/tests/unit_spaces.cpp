#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "ferroflow/mesh.hpp"
#include "ferroflow/quadrature.hpp"
#include "ferroflow/spaces.hpp"

using namespace ferroflow;

namespace {

const std::array<Vec3, 4> kRefVertices = {
    Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};

Vec3 random_interior_ref(std::mt19937& rng) {
  std::uniform_real_distribution<double> dist(0.05, 0.9);
  for (;;) {
    Vec3 r(dist(rng), dist(rng), dist(rng));
    if (r.sum() < 0.9) return r;
  }
}

}  // namespace

TEST_CASE("dofmap counts on the n=1 mesh") {
  const Mesh mesh = build_uniform_mesh(1);

  const DofMap face = build_dofmap(mesh, SpaceKind::Face0);
  CHECK(face.n_total == 18);
  CHECK(face.n_free == 6);  // 12 boundary faces carry the m.n = 0 condition

  // all edges are unconstrained: the curls of the exact fields carry a
  // nonzero tangential boundary trace (see the spaces header)
  const DofMap edge = build_dofmap(mesh, SpaceKind::Edge0);
  CHECK(edge.n_total == 19);
  CHECK(edge.n_free == 19);

  const DofMap vel = build_dofmap(mesh, SpaceKind::MiniVelocity);
  CHECK(vel.n_total == 3 * 8 + 3 * 6);
  CHECK(vel.n_free == 18);  // all 8 vertices constrained; 6x3 bubbles free

  const DofMap pres = build_dofmap(mesh, SpaceKind::PressureP1);
  CHECK(pres.n_total == 8);
  CHECK(pres.zero_mean);

  const DofMap cell = build_dofmap(mesh, SpaceKind::Cell0);
  CHECK(cell.n_total == 6);
  CHECK(cell.zero_mean);
}

TEST_CASE("shared entities receive one global index from every cell") {
  const Mesh mesh = build_uniform_mesh(2);
  const DofMap face = build_dofmap(mesh, SpaceKind::Face0);
  for (int c = 0; c < mesh.num_cells(); ++c)
    for (int lf = 0; lf < 4; ++lf)
      CHECK(face.cell_dofs[c][lf] == mesh.cell_to_face[c][lf]);
}

TEST_CASE("P1 partition of unity and mini bubble vanishing on faces") {
  std::mt19937 rng(7);
  const Vec3 ref = random_interior_ref(rng);
  const auto vals = mini_scalar_values(ref);
  CHECK(vals.head<4>().sum() == doctest::Approx(1.0).epsilon(1e-14));
  // bubble vanishes where any barycentric coordinate is zero
  const auto face_vals = mini_scalar_values(Vec3(0.3, 0.3, 0.0));
  CHECK(face_vals(4) == doctest::Approx(0.0).epsilon(1e-15));
  // bubble value at the barycenter: 256/256 = 1? (256 * (1/4)^4 = 1)
  const auto center = mini_scalar_values(Vec3(0.25, 0.25, 0.25));
  CHECK(center(4) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("RT0 duality: unit normal flux through own face, zero elsewhere") {
  const Mesh mesh = build_uniform_mesh(2);
  const TriQuadratureRule rule = tri_rule(3);
  for (int c : {0, 17, 40}) {
    for (int lf = 0; lf < 4; ++lf) {
      const int f = mesh.cell_to_face[c][lf];
      const Vec3 n = mesh.face_normal(f);
      const double area = mesh.face_area(f);
      Eigen::Vector4d flux = Eigen::Vector4d::Zero();
      for (int q = 0; q < rule.weights.size(); ++q) {
        const double s = rule.points(0, q), t = rule.points(1, q);
        const auto& lv = kLocalFaces[lf];
        const Vec3 ref = (1.0 - s - t) * kRefVertices[lv[0]] +
                         s * kRefVertices[lv[1]] + t * kRefVertices[lv[2]];
        const auto vals = shape_values(mesh, SpaceKind::Face0, c, ref);
        for (int j = 0; j < 4; ++j)
          flux(j) += 2.0 * area * rule.weights(q) * n.dot(vals.col(j));
      }
      for (int j = 0; j < 4; ++j)
        CHECK(flux(j) == doctest::Approx(j == lf ? 1.0 : 0.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("NE0 duality: unit circulation along own edge, zero elsewhere") {
  const Mesh mesh = build_uniform_mesh(2);
  const LineQuadratureRule rule = line_rule(3);
  for (int c : {3, 25}) {
    for (int le = 0; le < 6; ++le) {
      const int e = mesh.cell_to_edge[c][le];
      const Vec3 tangent = mesh.vertices[mesh.edges[e][1]] -
                           mesh.vertices[mesh.edges[e][0]];  // global lo->hi
      // find local vertex indices of the global edge endpoints
      int la = -1, lb = -1;
      for (int i = 0; i < 4; ++i) {
        if (mesh.cells[c][i] == mesh.edges[e][0]) la = i;
        if (mesh.cells[c][i] == mesh.edges[e][1]) lb = i;
      }
      REQUIRE(la >= 0);
      REQUIRE(lb >= 0);
      Eigen::Matrix<double, 6, 1> circ = Eigen::Matrix<double, 6, 1>::Zero();
      for (int q = 0; q < rule.weights.size(); ++q) {
        const double s = rule.points(q);
        const Vec3 ref =
            (1.0 - s) * kRefVertices[la] + s * kRefVertices[lb];
        const auto vals = shape_values(mesh, SpaceKind::Edge0, c, ref);
        for (int j = 0; j < 6; ++j)
          circ(j) += rule.weights(q) * tangent.dot(vals.col(j));
      }
      for (int j = 0; j < 6; ++j)
        CHECK(circ(j) == doctest::Approx(j == le ? 1.0 : 0.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("analytic shape derivatives match central finite differences") {
  const Mesh mesh = build_uniform_mesh(2);
  std::mt19937 rng(42);
  const double h = 1e-6;
  for (int trial = 0; trial < 10; ++trial) {
    const int c = std::uniform_int_distribution<int>(
        0, mesh.num_cells() - 1)(rng);
    const Vec3 ref = random_interior_ref(rng);
    const Eigen::Matrix3d Jinv = mesh.cell_jacobian[c].inverse();

    for (SpaceKind kind : {SpaceKind::MiniVelocity, SpaceKind::PressureP1,
                           SpaceKind::Edge0, SpaceKind::Face0}) {
      const auto deriv = shape_derivatives(mesh, kind, c, ref);
      const int ndof = static_cast<int>(
          shape_values(mesh, kind, c, ref).cols());
      // finite-difference physical Jacobian of every basis function
      std::vector<Eigen::MatrixXd> dphi(3);
      for (int d = 0; d < 3; ++d) {
        const Vec3 dr = Jinv * Vec3::Unit(d) * h;  // physical step -> ref step
        dphi[d] = (shape_values(mesh, kind, c, ref + dr) -
                   shape_values(mesh, kind, c, ref - dr)) /
                  (2.0 * h);
      }
      for (int j = 0; j < ndof; ++j) {
        switch (kind) {
          case SpaceKind::MiniVelocity:
            for (int r = 0; r < 3; ++r)
              for (int d = 0; d < 3; ++d)
                CHECK(deriv(3 * r + d, j) ==
                      doctest::Approx(dphi[d](r, j)).epsilon(1e-6).scale(1.0));
            break;
          case SpaceKind::PressureP1:
            for (int d = 0; d < 3; ++d)
              CHECK(deriv(d, j) ==
                    doctest::Approx(dphi[d](0, j)).epsilon(1e-6).scale(1.0));
            break;
          case SpaceKind::Edge0: {
            const Vec3 curl(dphi[1](2, j) - dphi[2](1, j),
                            dphi[2](0, j) - dphi[0](2, j),
                            dphi[0](1, j) - dphi[1](0, j));
            for (int r = 0; r < 3; ++r)
              CHECK(deriv(r, j) ==
                    doctest::Approx(curl(r)).epsilon(1e-6).scale(1.0));
            break;
          }
          case SpaceKind::Face0: {
            const double div = dphi[0](0, j) + dphi[1](1, j) + dphi[2](2, j);
            CHECK(deriv(0, j) ==
                  doctest::Approx(div).epsilon(1e-6).scale(1.0));
            break;
          }
          default: break;
        }
      }
    }
  }
}

TEST_CASE("RT0 fields have continuous normal components across faces") {
  const Mesh mesh = build_uniform_mesh(2);
  const DofMap face = build_dofmap(mesh, SpaceKind::Face0);
  std::mt19937 rng(3);
  std::normal_distribution<double> dist;
  Eigen::VectorXd coeffs(face.n_total);
  for (int i = 0; i < coeffs.size(); ++i) coeffs(i) = dist(rng);

  for (int f = 0; f < mesh.num_faces(); ++f) {
    if (mesh.face_on_boundary[f]) continue;
    const Vec3 x = mesh.face_centroid(f);
    const Vec3 n = mesh.face_normal(f);
    double vals[2];
    for (int side = 0; side < 2; ++side) {
      const int c = mesh.face_cells[f][side];
      const Vec3 ref = mesh.cell_jacobian[c].inverse() *
                       (x - mesh.vertices[mesh.cells[c][0]]);
      const auto basis = shape_values(mesh, SpaceKind::Face0, c, ref);
      Vec3 v = Vec3::Zero();
      for (int lf = 0; lf < 4; ++lf)
        v += coeffs(face.cell_dofs[c][lf]) * basis.col(lf);
      vals[side] = n.dot(v);
    }
    CHECK(vals[0] == doctest::Approx(vals[1]).epsilon(1e-12));
  }
}

TEST_CASE("interpolation reproduces constants (Face0) and linears (P1)") {
  const Mesh mesh = build_uniform_mesh(2);
  const DofMap face = build_dofmap(mesh, SpaceKind::Face0);
  const Vec3 cvec(0.3, -1.2, 0.7);
  const auto cfield = [&](const Vec3&, double) { return cvec; };
  const FieldCoefficients mc = interpolate(mesh, face, cfield, 0.0);

  std::mt19937 rng(5);
  std::uniform_real_distribution<double> dist(0.05, 0.95);
  for (int i = 0; i < 20; ++i) {
    const Vec3 p(dist(rng), dist(rng), dist(rng));
    CHECK((eval_field(mesh, face, mc, p) - cvec).norm() < 1e-12);
  }

  const DofMap pres = build_dofmap(mesh, SpaceKind::PressureP1);
  // zero-mean linear so the mean shift is a no-op
  const auto lin = [](const Vec3& x, double) {
    return 2.0 * (x.x() - 0.5) + 3.0 * (x.y() - 0.5) - (x.z() - 0.5);
  };
  const FieldCoefficients pc = interpolate_scalar(mesh, pres, lin, 0.0);
  for (int i = 0; i < 20; ++i) {
    const Vec3 p(dist(rng), dist(rng), dist(rng));
    CHECK(eval_scalar_field(mesh, pres, pc, p) ==
          doctest::Approx(lin(p, 0.0)).epsilon(1e-12));
  }
}

TEST_CASE("eval_field of zero coefficients is zero; outside point throws") {
  const Mesh mesh = build_uniform_mesh(1);
  const DofMap face = build_dofmap(mesh, SpaceKind::Face0);
  FieldCoefficients zero{SpaceKind::Face0,
                         Eigen::VectorXd::Zero(face.n_total)};
  CHECK(eval_field(mesh, face, zero, Vec3(0.3, 0.4, 0.5)).norm() == 0.0);
  CHECK_THROWS(eval_field(mesh, face, zero, Vec3(1.5, 0.0, 0.0)));
}

TEST_CASE("locate_cell finds a containing cell with valid reference coords") {
  const Mesh mesh = build_uniform_mesh(2);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const Vec3 p(dist(rng), dist(rng), dist(rng));
    Vec3 ref;
    const int c = locate_cell(mesh, p, ref);
    REQUIRE(c >= 0);
    CHECK(ref.minCoeff() >= -1e-12);
    CHECK(ref.sum() <= 1.0 + 1e-12);
    CHECK((mesh.map_to_physical(c, ref) - p).norm() < 1e-12);
  }
}

TEST_CASE("discrete complex is exact: div of curl vanishes") {
  for (int n : {1, 2, 4}) {
    const Mesh mesh = build_uniform_mesh(n);
    const DofMap edge = build_dofmap(mesh, SpaceKind::Edge0);
    const DofMap face = build_dofmap(mesh, SpaceKind::Face0);
    const DofMap cell = build_dofmap(mesh, SpaceKind::Cell0);
    const Eigen::SparseMatrix<double> C = coeff_curl(mesh, edge, face);
    const Eigen::SparseMatrix<double> D = coeff_div(mesh, face, cell);
    const Eigen::SparseMatrix<double> DC = D * C;
    double max_abs = 0.0;
    for (int k = 0; k < DC.nonZeros(); ++k)
      max_abs = std::max(max_abs, std::abs(DC.valuePtr()[k]));
    CHECK(max_abs <= 1e-13);
  }
}
