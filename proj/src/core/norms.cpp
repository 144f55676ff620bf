#include "core/norms.hpp"

#include <cmath>
#include <vector>

#include "core/parallel.hpp"
#include "core/quadrature.hpp"

namespace sdg {

namespace {

int resolve(int requested, int degree) {
  return requested >= 0 ? requested : error_quadrature_degree(degree);
}

/// Per-element squared contributions computed in parallel, reduced in
/// element order so results do not depend on the thread count.
double reduce_elementwise(int n, const std::function<double(int)>& contribution) {
  std::vector<double> parts(n);
  parallel_for(n, [&](int i) { parts[i] = contribution(i); });
  double total = 0;
  for (double p : parts) total += p;
  return total;
}

}  // namespace

double l2_error_scalar(const StaggeredMesh& mesh, const DofMap& map, const Eigen::VectorXd& x,
                       const std::function<double(double, double)>& exact, int quad_degree) {
  const QuadratureRule rule = triangle_rule(resolve(quad_degree, map.degree));
  const Eigen::MatrixXd ref_vals = map.basis.values(rule.points);

  const double total = reduce_elementwise(mesh.n_tris(), [&](int tri) {
    const ElementGeometry geo = mesh.geometry(tri);
    const Eigen::VectorXd c = map.local_coeffs(tri, x);
    const double scale = 1.0 / std::sqrt(geo.det_jac);
    double part = 0;
    for (int q = 0; q < rule.size(); ++q) {
      const Eigen::Vector2d p = geo.to_physical(rule.points[q]);
      const double diff = exact(p.x(), p.y()) - scale * ref_vals.row(q).dot(c);
      part += rule.weights[q] * geo.det_jac * diff * diff;
    }
    return part;
  });
  return std::sqrt(total);
}

double l2_norm_scalar(const StaggeredMesh& mesh, const DofMap& map, const Eigen::VectorXd& x,
                      int quad_degree) {
  return l2_error_scalar(mesh, map, x, [](double, double) { return 0.0; }, quad_degree);
}

double l2_error_vector(const StaggeredMesh& mesh, const DofMap& map, const Eigen::VectorXd& x,
                       const std::function<Eigen::Vector2d(double, double)>& exact,
                       int quad_degree) {
  const QuadratureRule rule = triangle_rule(resolve(quad_degree, map.degree));
  const Eigen::MatrixXd ref_vals = map.basis.values(rule.points);
  const int m = map.basis.dim;

  const double total = reduce_elementwise(mesh.n_tris(), [&](int tri) {
    const ElementGeometry geo = mesh.geometry(tri);
    const Eigen::VectorXd c = map.local_coeffs(tri, x);
    const double scale = 1.0 / std::sqrt(geo.det_jac);
    double part = 0;
    for (int q = 0; q < rule.size(); ++q) {
      const Eigen::Vector2d p = geo.to_physical(rule.points[q]);
      const Eigen::Vector2d vh(scale * ref_vals.row(q).dot(c.head(m)),
                               scale * ref_vals.row(q).dot(c.tail(m)));
      part += rule.weights[q] * geo.det_jac * (exact(p.x(), p.y()) - vh).squaredNorm();
    }
    return part;
  });
  return std::sqrt(total);
}

double l2_error_postprocessed(const StaggeredMesh& mesh, const PostprocessedSolution& star,
                              const std::function<double(double, double)>& exact, int quad_degree) {
  const QuadratureRule rule = triangle_rule(resolve(quad_degree, star.degree));
  const Eigen::MatrixXd ref_vals = star.basis.values(rule.points);

  const double total = reduce_elementwise(mesh.n_tris(), [&](int tri) {
    const ElementGeometry geo = mesh.geometry(tri);
    const double scale = 1.0 / std::sqrt(geo.det_jac);
    double part = 0;
    for (int q = 0; q < rule.size(); ++q) {
      const Eigen::Vector2d p = geo.to_physical(rule.points[q]);
      const double diff = exact(p.x(), p.y()) - scale * ref_vals.row(q).dot(star.coeffs[tri]);
      part += rule.weights[q] * geo.det_jac * diff * diff;
    }
    return part;
  });
  return std::sqrt(total);
}

std::vector<Eigen::Vector2d> lagrange_nodes(int degree) {
  if (degree == 0) return {Eigen::Vector2d(1.0 / 3, 1.0 / 3)};
  std::vector<Eigen::Vector2d> nodes;
  for (int j = 0; j <= degree; ++j)
    for (int i = 0; i + j <= degree; ++i)
      nodes.emplace_back(static_cast<double>(i) / degree, static_cast<double>(j) / degree);
  return nodes;
}

namespace {

/// Modal coefficients (in the orthonormal reference basis) of the Lagrange
/// interpolant with the given nodal values.
struct Interpolator {
  std::vector<Eigen::Vector2d> nodes;
  Eigen::PartialPivLU<Eigen::MatrixXd> vandermonde;

  explicit Interpolator(const PolynomialBasis& basis)
      : nodes(lagrange_nodes(basis.degree)), vandermonde(basis.values(nodes)) {}
};

}  // namespace

double interpolation_error_scalar(const StaggeredMesh& mesh, const DofMap& map,
                                  const Eigen::VectorXd& x,
                                  const std::function<double(double, double)>& exact) {
  const Interpolator interp(map.basis);
  const int n = static_cast<int>(interp.nodes.size());

  const double total = reduce_elementwise(mesh.n_tris(), [&](int tri) {
    const ElementGeometry geo = mesh.geometry(tri);
    Eigen::VectorXd nodal(n);
    for (int i = 0; i < n; ++i) {
      const Eigen::Vector2d p = geo.to_physical(interp.nodes[i]);
      nodal(i) = exact(p.x(), p.y());
    }
    // local basis scaling 1/sqrt(det J) makes coefficient space an isometry
    // of L2 on the element
    const Eigen::VectorXd c_interp = std::sqrt(geo.det_jac) * interp.vandermonde.solve(nodal);
    return (c_interp - map.local_coeffs(tri, x)).squaredNorm();
  });
  return std::sqrt(total);
}

double interpolation_error_postprocessed(const StaggeredMesh& mesh,
                                         const PostprocessedSolution& star,
                                         const std::function<double(double, double)>& exact) {
  const Interpolator interp(star.basis);
  const int n = static_cast<int>(interp.nodes.size());

  const double total = reduce_elementwise(mesh.n_tris(), [&](int tri) {
    const ElementGeometry geo = mesh.geometry(tri);
    Eigen::VectorXd nodal(n);
    for (int i = 0; i < n; ++i) {
      const Eigen::Vector2d p = geo.to_physical(interp.nodes[i]);
      nodal(i) = exact(p.x(), p.y());
    }
    const Eigen::VectorXd c_interp = std::sqrt(geo.det_jac) * interp.vandermonde.solve(nodal);
    return (c_interp - star.coeffs[tri]).squaredNorm();
  });
  return std::sqrt(total);
}

UhNorms discrete_norms_uh(const StaggeredMesh& mesh, const DofMap& uh, const Eigen::VectorXd& x,
                          int quad_degree) {
  const int d = resolve(quad_degree, uh.degree);
  const QuadratureRule rule = triangle_rule(d);
  const Eigen::MatrixXd ref_vals = uh.basis.values(rule.points);
  auto [ref_dx, ref_dy] = uh.basis.gradients(rule.points);
  const GaussRule1d edge_rule = gauss_legendre_01(uh.degree + 2);

  double vol_l2 = 0, vol_h1 = 0;
  for (int tri = 0; tri < mesh.n_tris(); ++tri) {
    const ElementGeometry geo = mesh.geometry(tri);
    const Eigen::VectorXd c = uh.local_coeffs(tri, x);
    const double scale = 1.0 / std::sqrt(geo.det_jac);
    const Eigen::Matrix2d& it = geo.inv_jac_t;
    for (int q = 0; q < rule.size(); ++q) {
      const double w = rule.weights[q] * geo.det_jac;
      const double v = scale * ref_vals.row(q).dot(c);
      const double gx = scale * (it(0, 0) * ref_dx.row(q) + it(0, 1) * ref_dy.row(q)).dot(c);
      const double gy = scale * (it(1, 0) * ref_dx.row(q) + it(1, 1) * ref_dy.row(q)).dot(c);
      vol_l2 += w * v * v;
      vol_h1 += w * (gx * gx + gy * gy);
    }
  }

  auto trace_value = [&](int tri, const Eigen::Vector2d& p) {
    const ElementGeometry geo = mesh.geometry(tri);
    const Eigen::MatrixXd v = uh.basis.values({geo.to_reference(p)});
    return v.row(0).dot(uh.local_coeffs(tri, x)) / std::sqrt(geo.det_jac);
  };

  double edge_x = 0;
  for (int e : mesh.interior_primal_edges) {
    const Edge& edge = mesh.edges[e];
    for (size_t q = 0; q < edge_rule.points.size(); ++q) {
      const Eigen::Vector2d p =
          mesh.vertex(edge.a) + edge_rule.points[q] * (mesh.vertex(edge.b) - mesh.vertex(edge.a));
      const double v = trace_value(edge.tri[0], p);
      edge_x += edge.length * edge_rule.weights[q] * edge.length * v * v;  // h_e * int_e v^2
    }
  }

  double edge_z = 0;
  for (int e : mesh.dual_edges) {
    const Edge& edge = mesh.edges[e];
    for (size_t q = 0; q < edge_rule.points.size(); ++q) {
      const Eigen::Vector2d p =
          mesh.vertex(edge.a) + edge_rule.points[q] * (mesh.vertex(edge.b) - mesh.vertex(edge.a));
      const double jump = trace_value(edge.tri[0], p) - trace_value(edge.tri[1], p);
      edge_z += edge_rule.weights[q] * edge.length * jump * jump / edge.length;  // h_e^{-1} int_e [v]^2
    }
  }

  UhNorms norms;
  norms.x = std::sqrt(vol_l2 + edge_x);
  norms.z = std::sqrt(vol_h1 + edge_z);
  return norms;
}

WhNorms discrete_norms_wh(const StaggeredMesh& mesh, const DofMap& wh, const Eigen::VectorXd& x,
                          int quad_degree) {
  const int d = resolve(quad_degree, wh.degree);
  const QuadratureRule rule = triangle_rule(d);
  const Eigen::MatrixXd ref_vals = wh.basis.values(rule.points);
  auto [ref_dx, ref_dy] = wh.basis.gradients(rule.points);
  const GaussRule1d edge_rule = gauss_legendre_01(wh.degree + 2);
  const int m = wh.basis.dim;

  double vol_l2 = 0, vol_div = 0;
  for (int tri = 0; tri < mesh.n_tris(); ++tri) {
    const ElementGeometry geo = mesh.geometry(tri);
    const Eigen::VectorXd c = wh.local_coeffs(tri, x);
    const double scale = 1.0 / std::sqrt(geo.det_jac);
    const Eigen::Matrix2d& it = geo.inv_jac_t;
    for (int q = 0; q < rule.size(); ++q) {
      const double w = rule.weights[q] * geo.det_jac;
      const Eigen::Vector2d v(scale * ref_vals.row(q).dot(c.head(m)),
                              scale * ref_vals.row(q).dot(c.tail(m)));
      const double div = scale * ((it(0, 0) * ref_dx.row(q) + it(0, 1) * ref_dy.row(q)).dot(c.head(m)) +
                                  (it(1, 0) * ref_dx.row(q) + it(1, 1) * ref_dy.row(q)).dot(c.tail(m)));
      vol_l2 += w * v.squaredNorm();
      vol_div += w * div * div;
    }
  }

  auto normal_trace = [&](int tri, const Eigen::Vector2d& p, const Eigen::Vector2d& n) {
    const ElementGeometry geo = mesh.geometry(tri);
    const Eigen::MatrixXd v = wh.basis.values({geo.to_reference(p)});
    const Eigen::VectorXd c = wh.local_coeffs(tri, x);
    const double scale = 1.0 / std::sqrt(geo.det_jac);
    return scale * (n.x() * v.row(0).dot(c.head(m)) + n.y() * v.row(0).dot(c.tail(m)));
  };

  double edge_xp = 0;
  for (int e : mesh.dual_edges) {
    const Edge& edge = mesh.edges[e];
    for (size_t q = 0; q < edge_rule.points.size(); ++q) {
      const Eigen::Vector2d p =
          mesh.vertex(edge.a) + edge_rule.points[q] * (mesh.vertex(edge.b) - mesh.vertex(edge.a));
      const double vn = normal_trace(edge.tri[0], p, edge.normal);
      edge_xp += edge.length * edge_rule.weights[q] * edge.length * vn * vn;
    }
  }

  double edge_zp = 0;
  for (int e : mesh.interior_primal_edges) {
    const Edge& edge = mesh.edges[e];
    for (size_t q = 0; q < edge_rule.points.size(); ++q) {
      const Eigen::Vector2d p =
          mesh.vertex(edge.a) + edge_rule.points[q] * (mesh.vertex(edge.b) - mesh.vertex(edge.a));
      const double jump =
          normal_trace(edge.tri[0], p, edge.normal) - normal_trace(edge.tri[1], p, edge.normal);
      edge_zp += edge_rule.weights[q] * edge.length * jump * jump / edge.length;
    }
  }

  WhNorms norms;
  norms.x_prime = std::sqrt(vol_l2 + edge_xp);
  norms.z_prime = std::sqrt(vol_div + edge_zp);
  return norms;
}

}  // namespace sdg
