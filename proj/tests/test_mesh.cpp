#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <sstream>

#include "core/staggered_mesh.hpp"

using namespace sdg;

TEST_CASE("structured initial mesh: counts and tags") {
  SUBCASE("N=1: one square, one diagonal") {
    const InitialMesh mesh = build_structured_initial(1);
    CHECK(mesh.vertices.size() == 4);
    CHECK(mesh.triangles.size() == 2);
    CHECK(mesh.edges.size() == 5);
    int boundary = 0, interior = 0;
    for (const auto& e : mesh.edges) (e.boundary() ? boundary : interior) += 1;
    CHECK(boundary == 4);
    CHECK(interior == 1);
  }
  SUBCASE("N=2") {
    const InitialMesh mesh = build_structured_initial(2);
    CHECK(mesh.vertices.size() == 9);
    CHECK(mesh.triangles.size() == 8);
    int interior = 0;
    for (const auto& e : mesh.edges) interior += e.boundary() ? 0 : 1;
    CHECK(interior == 3 * 4 - 2 * 2);  // 2N(N+1)+N^2 edges minus 4N boundary
  }
  SUBCASE("N=4 matches the mesh-size-1/4 picture") {
    const InitialMesh mesh = build_structured_initial(4);
    CHECK(mesh.triangles.size() == 32);
    CHECK(mesh.vertices.size() == 25);
  }
  SUBCASE("rejects N=0") { CHECK_THROWS_AS(build_structured_initial(0), std::invalid_argument); }

  SUBCASE("validation accepts every structured mesh") {
    for (int n : {1, 2, 3, 4, 8}) CHECK_NOTHROW(validate_initial_mesh(build_structured_initial(n)));
  }
}

TEST_CASE("validation rejects broken meshes") {
  InitialMesh mesh = build_structured_initial(1);
  SUBCASE("negative orientation") {
    std::swap(mesh.triangles[0][0], mesh.triangles[0][1]);
    CHECK_THROWS_AS(validate_initial_mesh(mesh), std::invalid_argument);
  }
  SUBCASE("hanging node") {
    // split one triangle of the square in two without splitting its neighbour
    mesh.vertices.emplace_back(0.5, 0.5);  // midpoint of the diagonal
    mesh.triangles[0] = {0, 1, 4};
    mesh.triangles.push_back({1, 2, 4});
    CHECK_THROWS_AS(validate_initial_mesh(mesh), std::invalid_argument);
  }
}

TEST_CASE("centroid rule") {
  const std::array<Eigen::Vector2d, 3> tri{Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0),
                                           Eigen::Vector2d(0, 1)};
  const Eigen::Vector2d c = centroid_point(tri);
  CHECK(c.x() == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(c.y() == doctest::Approx(1.0 / 3).epsilon(1e-15));
}

TEST_CASE("subdivide: staggered structure") {
  SUBCASE("N=1 hand enumeration") {
    const StaggeredMesh mesh = subdivide(build_structured_initial(1));
    CHECK(mesh.n_tris() == 6);
    CHECK(mesh.dual_edges.size() == 6);
    CHECK(mesh.n_s_macros() == 2);
    CHECK(mesh.n_r_macros() == 5);
    CHECK(mesh.vertices.size() == 6);
  }
  SUBCASE("N=4 counts") {
    const StaggeredMesh mesh = subdivide(build_structured_initial(4));
    CHECK(mesh.n_tris() == 96);
    CHECK(mesh.dual_edges.size() == 3 * 32);  // three per first-type macro
  }
  SUBCASE("rejects an interior point rule leaving the triangle") {
    const auto outside = [](const std::array<Eigen::Vector2d, 3>&) {
      return Eigen::Vector2d(10.0, 10.0);
    };
    CHECK_THROWS_AS(subdivide(build_structured_initial(1), outside), std::invalid_argument);
  }
  SUBCASE("macro membership: every subtriangle in exactly one S and one R") {
    const StaggeredMesh mesh = subdivide(build_structured_initial(2));
    std::vector<int> s_count(mesh.n_tris(), 0), r_count(mesh.n_tris(), 0);
    for (const auto& s : mesh.s_map)
      for (int t : s) s_count[t] += 1;
    for (const auto& r : mesh.r_map)
      for (int t : r)
        if (t >= 0) r_count[t] += 1;
    for (int t = 0; t < mesh.n_tris(); ++t) {
      CHECK(s_count[t] == 1);
      CHECK(r_count[t] == 1);
    }
  }
  SUBCASE("interior R(e) is a pair sharing e, boundary R(e) a single subtriangle") {
    const StaggeredMesh mesh = subdivide(build_structured_initial(2));
    for (int p = 0; p < mesh.n_r_macros(); ++p) {
      const Edge& e = mesh.edges[mesh.primal_edges[p]];
      if (e.kind == EdgeKind::PrimalBoundary) {
        CHECK(mesh.r_map[p][1] == -1);
      } else {
        const auto& ta = mesh.tris[mesh.r_map[p][0]].v;
        const auto& tb = mesh.tris[mesh.r_map[p][1]].v;
        const std::set<int> sa(ta.begin(), ta.end());
        const std::set<int> sb(tb.begin(), tb.end());
        CHECK(sa.count(e.a) + sa.count(e.b) == 2);
        CHECK(sb.count(e.a) + sb.count(e.b) == 2);
      }
    }
  }
  SUBCASE("subtriangle areas add up to the parent area") {
    const InitialMesh initial = build_structured_initial(4);
    const StaggeredMesh mesh = subdivide(initial);
    for (int s = 0; s < mesh.n_s_macros(); ++s) {
      double sum = 0;
      for (int t : mesh.s_map[s]) sum += mesh.geometry(t).area();
      const auto& tri = initial.triangles[s];
      const ElementGeometry geo = make_element_geometry(
          initial.vertices[tri[0]], initial.vertices[tri[1]], initial.vertices[tri[2]]);
      CHECK(sum == doctest::Approx(geo.area()).epsilon(1e-13));
    }
  }
}

TEST_CASE("edge classification") {
  SUBCASE("N=1") {
    const StaggeredMesh mesh = subdivide(build_structured_initial(1));
    const EdgeClassification cls = classify_edges(mesh);
    CHECK(cls.f_u.size() == 5);
    CHECK(cls.f_u0.size() == 1);
    CHECK(cls.f_p.size() == 6);
  }
  SUBCASE("N=4 interior primal count") {
    const StaggeredMesh mesh = subdivide(build_structured_initial(4));
    const EdgeClassification cls = classify_edges(mesh);
    CHECK(cls.f_u0.size() == 3 * 16 - 2 * 4);
  }
  SUBCASE("partition is disjoint and total") {
    const StaggeredMesh mesh = subdivide(build_structured_initial(2));
    const EdgeClassification cls = classify_edges(mesh);
    std::set<int> fu(cls.f_u.begin(), cls.f_u.end());
    std::set<int> fp(cls.f_p.begin(), cls.f_p.end());
    for (int e : fp) CHECK(fu.count(e) == 0);
    CHECK(fu.size() + fp.size() == mesh.edges.size());
  }
}

TEST_CASE("mesh invariants on the structured family") {
  for (int n : {1, 2, 4, 8}) {
    CAPTURE(n);
    const StaggeredMesh mesh = subdivide(build_structured_initial(n));

    // Euler characteristic of a triangulated disk
    const int v = static_cast<int>(mesh.vertices.size());
    const int e = static_cast<int>(mesh.edges.size());
    const int f = mesh.n_tris();
    CHECK(v - e + f == 1);

    CHECK(mesh.n_tris() == 6 * n * n);
    CHECK(static_cast<int>(mesh.dual_edges.size()) == 6 * n * n);

    // shape regularity proxy for the centroid rule
    CHECK(min_angle_degrees(mesh) >= 15.0);

    for (const auto& edge : mesh.edges) {
      CHECK(edge.normal.norm() == doctest::Approx(1.0).epsilon(1e-14));
      if (edge.kind == EdgeKind::PrimalBoundary) {
        CHECK(edge.tri[1] == -1);
        // outward: on the unit square the boundary normal is axis-aligned
        const Eigen::Vector2d mid = 0.5 * (mesh.vertex(edge.a) + mesh.vertex(edge.b));
        const Eigen::Vector2d outward = mid - Eigen::Vector2d(0.5, 0.5);
        CHECK(edge.normal.dot(outward) > 0);
      } else {
        CHECK(edge.tri[0] >= 0);
        CHECK(edge.tri[1] >= 0);
        CHECK(edge.tri[0] < edge.tri[1]);
        // normal consistent with the jump convention: points tri[0] -> tri[1]
        Eigen::Vector2d c0 = Eigen::Vector2d::Zero(), c1 = Eigen::Vector2d::Zero();
        for (int l = 0; l < 3; ++l) {
          c0 += mesh.vertex(mesh.tris[edge.tri[0]].v[l]) / 3.0;
          c1 += mesh.vertex(mesh.tris[edge.tri[1]].v[l]) / 3.0;
        }
        CHECK(edge.normal.dot(c1 - c0) > 0);
      }
    }
  }
}

TEST_CASE("mesh dump golden file for N=1") {
  const StaggeredMesh mesh = subdivide(build_structured_initial(1));
  std::ostringstream out;
  dump_mesh(mesh, out);
  const std::string expected =
      "v 0 0\n"
      "v 1 0\n"
      "v 0 1\n"
      "v 1 1\n"
      "v 0.33333333333333331 0.33333333333333331\n"
      "v 0.66666666666666663 0.66666666666666663\n"
      "t 0 1 4 0\n"
      "t 1 2 4 0\n"
      "t 2 0 4 0\n"
      "t 1 3 5 1\n"
      "t 3 2 5 1\n"
      "t 2 1 5 1\n"
      "e 0 1 primal-boundary\n"
      "e 1 2 primal-interior\n"
      "e 0 2 primal-boundary\n"
      "e 1 3 primal-boundary\n"
      "e 2 3 primal-boundary\n"
      "e 0 4 dual\n"
      "e 1 4 dual\n"
      "e 2 4 dual\n"
      "e 1 5 dual\n"
      "e 3 5 dual\n"
      "e 2 5 dual\n";
  CHECK(out.str() == expected);
}

TEST_CASE("incenter rule also yields a valid staggered mesh") {
  const StaggeredMesh mesh = subdivide(build_structured_initial(2), incenter_point);
  CHECK(mesh.n_tris() == 24);
  CHECK(min_angle_degrees(mesh) > 0);
}
