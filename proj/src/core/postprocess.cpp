#include "core/postprocess.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "core/parallel.hpp"
#include "core/quadrature.hpp"

namespace sdg {

Eigen::VectorXd postprocess_local(const ElementGeometry& geo, const PolynomialBasis& basis,
                                  const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& grad_data,
                                  double target_mean, int quad_degree) {
  const QuadratureRule rule = triangle_rule(quad_degree);
  const int m = basis.dim;
  const double scale = 1.0 / std::sqrt(geo.det_jac);

  const Eigen::MatrixXd vals = basis.values(rule.points);
  auto [rdx, rdy] = basis.gradients(rule.points);
  const Eigen::Matrix2d& it = geo.inv_jac_t;
  const Eigen::MatrixXd dx = scale * (it(0, 0) * rdx + it(0, 1) * rdy);
  const Eigen::MatrixXd dy = scale * (it(1, 0) * rdx + it(1, 1) * rdy);

  Eigen::VectorXd w(rule.size());
  for (int q = 0; q < rule.size(); ++q) w(q) = rule.weights[q] * geo.det_jac;

  // stiffness, rhs moments of the gradient data, and basis means
  const Eigen::MatrixXd stiffness =
      dx.transpose() * w.asDiagonal() * dx + dy.transpose() * w.asDiagonal() * dy;
  Eigen::VectorXd gx(rule.size()), gy(rule.size());
  for (int q = 0; q < rule.size(); ++q) {
    const Eigen::Vector2d g = grad_data(geo.to_physical(rule.points[q]));
    gx(q) = w(q) * g.x();
    gy(q) = w(q) * g.y();
  }
  const Eigen::VectorXd rhs = dx.transpose() * gx + dy.transpose() * gy;
  const Eigen::VectorXd means = (scale * vals).transpose() * w;

  // [K m; m^T 0] [c; lambda] = [rhs; area * target_mean]
  Eigen::MatrixXd system = Eigen::MatrixXd::Zero(m + 1, m + 1);
  system.topLeftCorner(m, m) = stiffness;
  system.topRightCorner(m, 1) = means;
  system.bottomLeftCorner(1, m) = means.transpose();
  Eigen::VectorXd full_rhs(m + 1);
  full_rhs.head(m) = rhs;
  full_rhs(m) = geo.area() * target_mean;

  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(system);
  if (qr.rank() < m + 1)
    throw std::runtime_error("postprocess_local: singular local system (degenerate element)");
  return qr.solve(full_rhs).head(m);
}

PostprocessedSolution postprocess(const StaggeredMesh& mesh, const DofMap& uh, const DofMap& wh,
                                  const Eigen::VectorXd& u_hat, const Eigen::VectorXd& g_hat,
                                  int quad_degree, int threads) {
  PostprocessedSolution star;
  star.degree = uh.degree + 1;
  star.basis = orthonormal_triangle_basis(star.degree);
  star.coeffs.resize(mesh.n_tris());
  if (quad_degree < 0) quad_degree = 2 * star.degree + 2;

  const QuadratureRule mean_rule = triangle_rule(uh.degree);

  parallel_for(mesh.n_tris(), [&](int tri) {
    const ElementGeometry geo = mesh.geometry(tri);
    const int mw = wh.basis.dim;
    const Eigen::VectorXd cu = uh.local_coeffs(tri, u_hat);
    const Eigen::VectorXd cw = wh.local_coeffs(tri, g_hat);
    const double scale = 1.0 / std::sqrt(geo.det_jac);

    // mean of u_h over the element
    double mean = 0;
    const Eigen::MatrixXd uvals = uh.basis.values(mean_rule.points);
    for (int q = 0; q < mean_rule.size(); ++q)
      mean += mean_rule.weights[q] * geo.det_jac * scale * uvals.row(q).dot(cu);
    mean /= geo.area();

    auto grad_data = [&](const Eigen::Vector2d& phys) {
      const Eigen::MatrixXd v = wh.basis.values({geo.to_reference(phys)});
      return Eigen::Vector2d(scale * v.row(0).dot(cw.head(mw)), scale * v.row(0).dot(cw.tail(mw)));
    };
    try {
      star.coeffs[tri] = postprocess_local(geo, star.basis, grad_data, mean, quad_degree);
    } catch (const std::runtime_error& err) {
      throw std::runtime_error("postprocess: subtriangle " + std::to_string(tri) + ": " + err.what());
    }
  }, threads);
  return star;
}

double evaluate_postprocessed_on(const StaggeredMesh& mesh, const PostprocessedSolution& star,
                                 int tri, const Eigen::Vector2d& point) {
  const ElementGeometry geo = mesh.geometry(tri);
  const Eigen::MatrixXd vals = star.basis.values({geo.to_reference(point)});
  return vals.row(0).dot(star.coeffs[tri]) / std::sqrt(geo.det_jac);
}

double postprocessed_mean(const StaggeredMesh& mesh, const PostprocessedSolution& star, int tri) {
  const ElementGeometry geo = mesh.geometry(tri);
  const QuadratureRule rule = triangle_rule(star.degree);
  const Eigen::MatrixXd vals = star.basis.values(rule.points);
  double mean = 0;
  for (int q = 0; q < rule.size(); ++q)
    mean += rule.weights[q] * geo.det_jac * vals.row(q).dot(star.coeffs[tri]) / std::sqrt(geo.det_jac);
  return mean / geo.area();
}

}  // namespace sdg
