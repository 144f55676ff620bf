#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "core/newton.hpp"
#include "core/norms.hpp"
#include "core/postprocess.hpp"
#include "support/oracles.hpp"

using namespace sdg;

TEST_CASE("local reconstruction") {
  const ElementGeometry geo = make_element_geometry({0.1, 0.2}, {0.7, 0.3}, {0.35, 0.9});
  const PolynomialBasis p2 = orthonormal_triangle_basis(2);

  SUBCASE("zero gradient data with a constant mean gives the constant") {
    const double c = 3.25;
    const Eigen::VectorXd coeffs = postprocess_local(
        geo, p2, [](const Eigen::Vector2d&) { return Eigen::Vector2d::Zero().eval(); }, c, 6);
    for (const auto& ref : {Eigen::Vector2d(0.2, 0.3), Eigen::Vector2d(0.6, 0.1)}) {
      const Eigen::MatrixXd vals = p2.values({ref});
      CHECK(vals.row(0).dot(coeffs) / std::sqrt(geo.det_jac) == doctest::Approx(c).epsilon(1e-13));
    }
  }

  SUBCASE("consistent P^{k+1} data is reproduced exactly") {
    // p(x,y) = 2 + x - 3y + x^2 + 0.5 xy - y^2
    auto p = [](const Eigen::Vector2d& v) {
      return 2 + v.x() - 3 * v.y() + v.x() * v.x() + 0.5 * v.x() * v.y() - v.y() * v.y();
    };
    auto grad_p = [](const Eigen::Vector2d& v) {
      return Eigen::Vector2d(1 + 2 * v.x() + 0.5 * v.y(), -3 + 0.5 * v.x() - 2 * v.y());
    };
    const QuadratureRule rule = triangle_rule(4);
    double mean = 0;
    for (int q = 0; q < rule.size(); ++q)
      mean += rule.weights[q] * geo.det_jac * p(geo.to_physical(rule.points[q]));
    mean /= geo.area();

    const Eigen::VectorXd coeffs = postprocess_local(geo, p2, grad_p, mean, 6);
    for (const auto& ref : {Eigen::Vector2d(0.25, 0.3), Eigen::Vector2d(0.05, 0.8)}) {
      const Eigen::MatrixXd vals = p2.values({ref});
      CHECK(vals.row(0).dot(coeffs) / std::sqrt(geo.det_jac) ==
            doctest::Approx(p(geo.to_physical(ref))).epsilon(1e-12));
    }
  }
}

TEST_CASE("postprocessed solution of a solved state") {
  const StaggeredMesh mesh = subdivide(build_structured_initial(4));
  const DofMap uh = build_dofmap_uh(mesh, 1);
  const DofMap wh = build_dofmap_wh(mesh, 1);
  const ProblemInstance prob = make_problem("u1", "rho1");
  const SdgSystem system = build_system(mesh, uh, wh, prob.forcing);
  const SdgSolution sol = newton_solve(system, prob.coefficient);
  REQUIRE(sol.report.converged);
  const PostprocessedSolution star = postprocess(mesh, uh, wh, sol.u_hat, sol.gradient_hat);

  SUBCASE("mean is conserved on every element") {
    const QuadratureRule rule = triangle_rule(4);
    const Eigen::MatrixXd uvals = uh.basis.values(rule.points);
    for (int tri = 0; tri < mesh.n_tris(); ++tri) {
      const ElementGeometry geo = mesh.geometry(tri);
      const Eigen::VectorXd cu = uh.local_coeffs(tri, sol.u_hat);
      double mean_h = 0;
      for (int q = 0; q < rule.size(); ++q)
        mean_h += rule.weights[q] * geo.det_jac * uvals.row(q).dot(cu) / std::sqrt(geo.det_jac);
      mean_h /= geo.area();
      const double mean_star = postprocessed_mean(mesh, star, tri);
      CHECK(mean_star == doctest::Approx(mean_h).epsilon(1e-12));
    }
  }

  SUBCASE("one extra order of accuracy than u_h") {
    const double err_u = l2_error_scalar(mesh, uh, sol.u_hat, prob.solution.value);
    const double err_star = l2_error_postprocessed(mesh, star, prob.solution.value);
    CHECK(err_star * 4.0 < err_u);
  }

  SUBCASE("serial and parallel postprocessing agree bitwise") {
    const PostprocessedSolution serial =
        postprocess(mesh, uh, wh, sol.u_hat, sol.gradient_hat, -1, 1);
    const PostprocessedSolution parallel =
        postprocess(mesh, uh, wh, sol.u_hat, sol.gradient_hat, -1, 4);
    REQUIRE(serial.coeffs.size() == parallel.coeffs.size());
    for (int tri = 0; tri < mesh.n_tris(); ++tri) {
      REQUIRE(serial.coeffs[tri].size() == parallel.coeffs[tri].size());
      for (Eigen::Index i = 0; i < serial.coeffs[tri].size(); ++i)
        CHECK(serial.coeffs[tri](i) == parallel.coeffs[tri](i));
    }
  }

  SUBCASE("local Neumann system residual at solver tolerance") {
    // re-check the defining equations of u* on a few elements: the weak
    // gradient match against mean-zero P^2 test functions
    const QuadratureRule rule = triangle_rule(6);
    for (int tri : {0, 7, 23}) {
      const ElementGeometry geo = mesh.geometry(tri);
      const Eigen::MatrixXd vals = star.basis.values(rule.points);
      auto [rdx, rdy] = star.basis.gradients(rule.points);
      const double scale = 1.0 / std::sqrt(geo.det_jac);
      const Eigen::Matrix2d& it = geo.inv_jac_t;
      const Eigen::MatrixXd dx = scale * (it(0, 0) * rdx + it(0, 1) * rdy);
      const Eigen::MatrixXd dy = scale * (it(1, 0) * rdx + it(1, 1) * rdy);
      for (int j = 0; j < star.basis.dim; ++j) {
        double lhs = 0, rhs = 0;
        for (int q = 0; q < rule.size(); ++q) {
          const double w = rule.weights[q] * geo.det_jac;
          const double gx = dx.row(q).dot(star.coeffs[tri]);
          const double gy = dy.row(q).dot(star.coeffs[tri]);
          const Eigen::Vector2d gh =
              evaluate_vector_on(mesh, wh, sol.gradient_hat, tri, geo.to_physical(rule.points[q]));
          lhs += w * (gx * dx(q, j) + gy * dy(q, j));
          rhs += w * (gh.x() * dx(q, j) + gh.y() * dy(q, j));
        }
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10).scale(1.0));
      }
    }
  }
}
