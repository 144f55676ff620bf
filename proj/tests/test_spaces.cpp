#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "core/dof_map.hpp"
#include "core/quadrature.hpp"
#include "support/oracles.hpp"

using namespace sdg;

namespace {

/// Worst trace mismatch across all constrained edges for a coefficient vector.
double uh_constraint_mismatch(const StaggeredMesh& mesh, const DofMap& uh, const Eigen::VectorXd& x) {
  const GaussRule1d rule = gauss_legendre_01(uh.degree + 1);
  double worst = 0;
  for (int p = 0; p < mesh.n_r_macros(); ++p) {
    const Edge& edge = mesh.edges[mesh.primal_edges[p]];
    for (double t : rule.points) {
      const Eigen::Vector2d pt = mesh.vertex(edge.a) + t * (mesh.vertex(edge.b) - mesh.vertex(edge.a));
      const double v0 = evaluate_scalar_on(mesh, uh, x, edge.tri[0], pt);
      const double v1 = edge.interior() ? evaluate_scalar_on(mesh, uh, x, edge.tri[1], pt) : 0.0;
      worst = std::max(worst, std::abs(v0 - v1));
    }
  }
  return worst;
}

double wh_constraint_mismatch(const StaggeredMesh& mesh, const DofMap& wh, const Eigen::VectorXd& x) {
  const GaussRule1d rule = gauss_legendre_01(wh.degree + 1);
  double worst = 0;
  for (int e : mesh.dual_edges) {
    const Edge& edge = mesh.edges[e];
    for (double t : rule.points) {
      const Eigen::Vector2d pt = mesh.vertex(edge.a) + t * (mesh.vertex(edge.b) - mesh.vertex(edge.a));
      const double n0 = evaluate_vector_on(mesh, wh, x, edge.tri[0], pt).dot(edge.normal);
      const double n1 = evaluate_vector_on(mesh, wh, x, edge.tri[1], pt).dot(edge.normal);
      worst = std::max(worst, std::abs(n0 - n1));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("U^h dimensions") {
  SUBCASE("k=1 per-macro counts and N=1 total") {
    const StaggeredMesh mesh = subdivide(build_structured_initial(1));
    const DofMap uh = build_dofmap_uh(mesh, 1);
    CHECK(uh.n_global == 8);  // 1 interior R(e) with 4 dofs + 4 boundary with 1
    for (int p = 0; p < mesh.n_r_macros(); ++p) {
      const bool interior = mesh.edges[mesh.primal_edges[p]].interior();
      CHECK(uh.macros[p].n_dofs() == (interior ? 4 : 1));
    }
  }
  SUBCASE("k=1, N=4") {
    const StaggeredMesh mesh = subdivide(build_structured_initial(4));
    CHECK(build_dofmap_uh(mesh, 1).n_global == 40 * 4 + 16 * 1);
  }
  SUBCASE("k=0: one dof per interior R(e), none on boundary macros") {
    const StaggeredMesh mesh = subdivide(build_structured_initial(2));
    const DofMap uh = build_dofmap_uh(mesh, 0);
    for (int p = 0; p < mesh.n_r_macros(); ++p) {
      const bool interior = mesh.edges[mesh.primal_edges[p]].interior();
      CHECK(uh.macros[p].n_dofs() == (interior ? 1 : 0));
    }
  }
  SUBCASE("dimension formula on the structured family, k=1") {
    for (int n : {1, 2, 4, 8}) {
      const StaggeredMesh mesh = subdivide(build_structured_initial(n));
      const int interior = 3 * n * n - 2 * n;
      const int boundary = 4 * n;
      CHECK(build_dofmap_uh(mesh, 1).n_global == 4 * interior + boundary);
    }
  }
}

TEST_CASE("W^h dimensions") {
  SUBCASE("k=1: 12 dofs per S(nu)") {
    const StaggeredMesh mesh = subdivide(build_structured_initial(1));
    const DofMap wh = build_dofmap_wh(mesh, 1);
    CHECK(wh.n_global == 24);
    for (const auto& mb : wh.macros) CHECK(mb.n_dofs() == 12);
  }
  SUBCASE("k=0: 3 dofs per S(nu)") {
    const StaggeredMesh mesh = subdivide(build_structured_initial(2));
    const DofMap wh = build_dofmap_wh(mesh, 0);
    for (const auto& mb : wh.macros) CHECK(mb.n_dofs() == 3);
  }
  SUBCASE("k=2 formula: 6m - 3(k+1)") {
    const StaggeredMesh mesh = subdivide(build_structured_initial(1));
    const DofMap wh = build_dofmap_wh(mesh, 2);
    for (const auto& mb : wh.macros) CHECK(mb.n_dofs() == 6 * 6 - 3 * 3);
  }
  SUBCASE("dimension formula on the structured family, k=1") {
    for (int n : {1, 2, 4, 8})
      CHECK(build_dofmap_wh(subdivide(build_structured_initial(n)), 1).n_global == 24 * n * n);
  }
}

TEST_CASE("constraint elimination exactness") {
  for (int n : {1, 2}) {
    for (int k : {0, 1, 2}) {
      CAPTURE(n);
      CAPTURE(k);
      const StaggeredMesh mesh = subdivide(build_structured_initial(n));
      const DofMap uh = build_dofmap_uh(mesh, k);
      const DofMap wh = build_dofmap_wh(mesh, k);
      std::mt19937 gen(1234 + 7 * n + k);
      std::uniform_real_distribution<double> dist(-1.0, 1.0);
      const int reps = (n == 1 && k == 1) ? 1000 : 50;
      for (int rep = 0; rep < reps; ++rep) {
        Eigen::VectorXd xu(uh.n_global), xw(wh.n_global);
        for (int i = 0; i < xu.size(); ++i) xu(i) = dist(gen);
        for (int i = 0; i < xw.size(); ++i) xw(i) = dist(gen);
        CHECK(uh_constraint_mismatch(mesh, uh, xu) < 1e-11);
        CHECK(wh_constraint_mismatch(mesh, wh, xw) < 1e-11);
      }
    }
  }
}

TEST_CASE("evaluation services") {
  const StaggeredMesh mesh = subdivide(build_structured_initial(1));
  const DofMap uh = build_dofmap_uh(mesh, 1);
  const DofMap wh = build_dofmap_wh(mesh, 1);

  SUBCASE("zero coefficients evaluate to zero") {
    const Eigen::VectorXd zu = Eigen::VectorXd::Zero(uh.n_global);
    const Eigen::VectorXd zw = Eigen::VectorXd::Zero(wh.n_global);
    CHECK(evaluate_scalar(mesh, uh, zu, {0.3, 0.4}) == 0.0);
    CHECK(evaluate_vector(mesh, wh, zw, {0.3, 0.4}).norm() == 0.0);
  }

  SUBCASE("point location failure outside the domain") {
    const Eigen::VectorXd zu = Eigen::VectorXd::Zero(uh.n_global);
    CHECK_THROWS_AS(evaluate_scalar(mesh, uh, zu, {2.0, 2.0}), std::invalid_argument);
  }

  SUBCASE("hat function at an interior point is reproduced at nodes") {
    // piecewise linear hat: 1 at the first centroid, 0 at all primal
    // vertices, identically zero outside macro 0; lies in U^h
    const Eigen::Vector2d peak = mesh.vertex(4);
    auto hat = [&](double x, double y) {
      const int tri = mesh.locate({x, y});
      if (tri < 0 || mesh.tris[tri].macro_s != 0) return 0.0;
      const ElementGeometry geo = mesh.geometry(tri);
      const Eigen::Vector2d ref = geo.to_reference({x, y});
      return ref.y();  // vertex 2 of every subtriangle is the interior point
    };
    const Eigen::VectorXd coeffs = testing::project_scalar(mesh, uh, hat, 4);
    CHECK(evaluate_scalar(mesh, uh, coeffs, peak) == doctest::Approx(1.0).epsilon(1e-12));
    for (int v = 0; v < 4; ++v) {
      const Eigen::Vector2d p = mesh.vertex(v);
      // nudge inward so location is unambiguous at corners
      const Eigen::Vector2d q = p + 1e-9 * (Eigen::Vector2d(0.5, 0.5) - p);
      CHECK(evaluate_scalar(mesh, uh, coeffs, q) == doctest::Approx(0.0).epsilon(1e-8));
    }
    // interpolant reproduces values at arbitrary points of macro 0
    const Eigen::Vector2d probe(0.55, 0.3);
    CHECK(evaluate_scalar(mesh, uh, coeffs, probe) ==
          doctest::Approx(hat(probe.x(), probe.y())).epsilon(1e-12));
  }

  SUBCASE("W^h normal traces agree from both sides at dual edge midpoints") {
    const Eigen::VectorXd x = testing::random_vector(wh.n_global, 99);
    for (int e : mesh.dual_edges) {
      const Edge& edge = mesh.edges[e];
      const Eigen::Vector2d mid = 0.5 * (mesh.vertex(edge.a) + mesh.vertex(edge.b));
      const double n0 = evaluate_vector_on(mesh, wh, x, edge.tri[0], mid).dot(edge.normal);
      const double n1 = evaluate_vector_on(mesh, wh, x, edge.tri[1], mid).dot(edge.normal);
      CHECK(n0 == doctest::Approx(n1).epsilon(1e-12));
    }
  }
}

TEST_CASE("degenerate macro is reported with its index") {
  // doctored mesh: collapsing a primal edge to zero length makes every
  // trace sample coincide, so the constraint matrix loses rank
  StaggeredMesh mesh = subdivide(build_structured_initial(1));
  mesh.edges[2].b = mesh.edges[2].a;  // the interior primal edge
  CHECK_THROWS_WITH_AS(build_dofmap_uh(mesh, 1), doctest::Contains("macro element 2"),
                       std::runtime_error);
}

TEST_CASE("boundary traces vanish") {
  const StaggeredMesh mesh = subdivide(build_structured_initial(2));
  const DofMap uh = build_dofmap_uh(mesh, 2);
  const Eigen::VectorXd x = testing::random_vector(uh.n_global, 7);
  for (int p = 0; p < mesh.n_r_macros(); ++p) {
    const Edge& edge = mesh.edges[mesh.primal_edges[p]];
    if (edge.interior()) continue;
    for (double t : {0.1, 0.5, 0.83}) {
      const Eigen::Vector2d pt = mesh.vertex(edge.a) + t * (mesh.vertex(edge.b) - mesh.vertex(edge.a));
      CHECK(std::abs(evaluate_scalar_on(mesh, uh, x, edge.tri[0], pt)) < 1e-12);
    }
  }
}
