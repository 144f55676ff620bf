#include "core/dof_map.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "core/parallel.hpp"
#include "core/quadrature.hpp"

namespace sdg {

namespace {

/// Physical points of the (degree+2)-point Gauss rule on an edge, and the
/// scaled basis values of a subtriangle's local basis at those points.
std::vector<Eigen::Vector2d> edge_gauss_points(const StaggeredMesh& mesh, const Edge& edge,
                                               const GaussRule1d& rule) {
  const Eigen::Vector2d pa = mesh.vertex(edge.a);
  const Eigen::Vector2d pb = mesh.vertex(edge.b);
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(rule.points.size());
  for (double t : rule.points) pts.push_back(pa + t * (pb - pa));
  return pts;
}

/// Trace values of the scaled local basis of `tri` at physical points;
/// (n_points x m). Scaling 1/sqrt(det J) makes the local basis
/// L2-orthonormal on the physical triangle.
Eigen::MatrixXd trace_values(const StaggeredMesh& mesh, const PolynomialBasis& basis, int tri,
                             const std::vector<Eigen::Vector2d>& phys_pts) {
  const ElementGeometry geo = mesh.geometry(tri);
  std::vector<Eigen::Vector2d> ref;
  ref.reserve(phys_pts.size());
  for (const auto& p : phys_pts) ref.push_back(geo.to_reference(p));
  return basis.values(ref) / std::sqrt(geo.det_jac);
}

/// Orthonormal null-space basis of the constraint matrix; verifies the
/// numerical rank against the expected one.
Eigen::MatrixXd constraint_null_space(const Eigen::MatrixXd& constraints, int expected_rank,
                                      const char* space, int macro) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(constraints, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double tol = sv.size() > 0 ? 1e-10 * sv(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++rank;
  if (rank != expected_rank)
    throw std::runtime_error(std::string(space) + " dof map: degenerate macro element " +
                             std::to_string(macro) + " (constraint rank " + std::to_string(rank) +
                             ", expected " + std::to_string(expected_rank) + ")");
  return svd.matrixV().rightCols(constraints.cols() - rank);
}

void finalize(DofMap& map, const StaggeredMesh& mesh) {
  map.tri_macro.assign(mesh.n_tris(), -1);
  map.tri_slot.assign(mesh.n_tris(), -1);
  int offset = 0;
  for (size_t m = 0; m < map.macros.size(); ++m) {
    MacroBlock& mb = map.macros[m];
    const int n_dofs = static_cast<int>(mb.null_basis.cols());
    mb.global.resize(n_dofs);
    for (int g = 0; g < n_dofs; ++g) mb.global[g] = offset + g;
    offset += n_dofs;
    for (size_t s = 0; s < mb.tris.size(); ++s) {
      map.tri_macro[mb.tris[s]] = static_cast<int>(m);
      map.tri_slot[mb.tris[s]] = static_cast<int>(s);
    }
  }
  map.n_global = offset;
}

}  // namespace

Eigen::VectorXd DofMap::gather(const MacroBlock& mb, const Eigen::VectorXd& x) const {
  Eigen::VectorXd values(mb.n_dofs());
  for (int g = 0; g < mb.n_dofs(); ++g) values(g) = x(mb.global[g]);
  return values;
}

Eigen::VectorXd DofMap::local_coeffs(int tri, const Eigen::VectorXd& x) const {
  const MacroBlock& mb = macros[tri_macro[tri]];
  return tri_restriction(tri) * gather(mb, x);
}

Eigen::VectorXd DofMap::project_local(const std::vector<Eigen::VectorXd>& local) const {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n_global);
  for (const MacroBlock& mb : macros) {
    Eigen::VectorXd stacked(static_cast<Eigen::Index>(mb.tris.size()) * local_dim);
    for (size_t s = 0; s < mb.tris.size(); ++s)
      stacked.segment(static_cast<Eigen::Index>(s) * local_dim, local_dim) = local[mb.tris[s]];
    const Eigen::VectorXd dofs = mb.null_basis.transpose() * stacked;
    for (int g = 0; g < mb.n_dofs(); ++g) x(mb.global[g]) = dofs(g);
  }
  return x;
}

DofMap build_dofmap_uh(const StaggeredMesh& mesh, int degree) {
  if (degree < 0) throw std::invalid_argument("build_dofmap_uh: negative degree");

  DofMap map;
  map.degree = degree;
  map.vector_valued = false;
  map.basis = orthonormal_triangle_basis(degree);
  const int m = map.basis.dim;
  map.local_dim = m;
  map.macros.resize(mesh.n_r_macros());

  const GaussRule1d rule = gauss_legendre_01(degree + 2);
  parallel_for(mesh.n_r_macros(), [&](int p) {
    const Edge& edge = mesh.edges[mesh.primal_edges[p]];
    MacroBlock mb;
    mb.tris.push_back(edge.tri[0]);
    if (edge.interior()) mb.tris.push_back(edge.tri[1]);

    const auto pts = edge_gauss_points(mesh, edge, rule);
    const int n_pts = static_cast<int>(pts.size());
    Eigen::MatrixXd constraints(n_pts, static_cast<Eigen::Index>(mb.tris.size()) * m);
    constraints.leftCols(m) = trace_values(mesh, map.basis, edge.tri[0], pts);
    if (edge.interior()) constraints.rightCols(m) = -trace_values(mesh, map.basis, edge.tri[1], pts);

    mb.null_basis = constraint_null_space(constraints, degree + 1, "U^h", p);
    map.macros[p] = std::move(mb);
  });

  finalize(map, mesh);
  return map;
}

DofMap build_dofmap_wh(const StaggeredMesh& mesh, int degree) {
  if (degree < 0) throw std::invalid_argument("build_dofmap_wh: negative degree");

  DofMap map;
  map.degree = degree;
  map.vector_valued = true;
  map.basis = orthonormal_triangle_basis(degree);
  const int m = map.basis.dim;
  map.local_dim = 2 * m;
  map.macros.resize(mesh.n_s_macros());

  const GaussRule1d rule = gauss_legendre_01(degree + 2);
  const int n_pts = static_cast<int>(rule.points.size());
  parallel_for(mesh.n_s_macros(), [&](int s) {
    MacroBlock mb;
    mb.tris.assign(mesh.s_map[s].begin(), mesh.s_map[s].end());
    auto slot_of = [&](int tri) {
      for (int l = 0; l < 3; ++l)
        if (mb.tris[l] == tri) return l;
      throw std::runtime_error("build_dofmap_wh: dual edge outside its macro");
    };

    Eigen::MatrixXd constraints = Eigen::MatrixXd::Zero(3 * n_pts, 6 * m);
    for (int d = 0; d < 3; ++d) {
      const Edge& edge = mesh.edges[mesh.s_dual_edges[s][d]];
      const auto pts = edge_gauss_points(mesh, edge, rule);
      for (int side = 0; side < 2; ++side) {
        const int tri = edge.tri[side];
        const Eigen::MatrixXd tv = trace_values(mesh, map.basis, tri, pts);
        const double sign = side == 0 ? 1.0 : -1.0;
        const int col0 = slot_of(tri) * 2 * m;
        constraints.block(d * n_pts, col0, n_pts, m) += sign * edge.normal.x() * tv;
        constraints.block(d * n_pts, col0 + m, n_pts, m) += sign * edge.normal.y() * tv;
      }
    }

    mb.null_basis = constraint_null_space(constraints, 3 * (degree + 1), "W^h", s);
    map.macros[s] = std::move(mb);
  });

  finalize(map, mesh);
  return map;
}

double evaluate_scalar_on(const StaggeredMesh& mesh, const DofMap& map, const Eigen::VectorXd& x,
                          int tri, const Eigen::Vector2d& point) {
  const ElementGeometry geo = mesh.geometry(tri);
  const Eigen::VectorXd c = map.local_coeffs(tri, x);
  const Eigen::MatrixXd vals = map.basis.values({geo.to_reference(point)});
  return vals.row(0).dot(c) / std::sqrt(geo.det_jac);
}

double evaluate_scalar(const StaggeredMesh& mesh, const DofMap& map, const Eigen::VectorXd& x,
                       const Eigen::Vector2d& point) {
  const int tri = mesh.locate(point);
  if (tri < 0)
    throw std::invalid_argument("evaluate_scalar: point (" + std::to_string(point.x()) + ", " +
                                std::to_string(point.y()) + ") is outside the mesh");
  return evaluate_scalar_on(mesh, map, x, tri, point);
}

Eigen::Vector2d evaluate_vector_on(const StaggeredMesh& mesh, const DofMap& map,
                                   const Eigen::VectorXd& x, int tri, const Eigen::Vector2d& point) {
  const ElementGeometry geo = mesh.geometry(tri);
  const Eigen::VectorXd c = map.local_coeffs(tri, x);
  const int m = map.basis.dim;
  const Eigen::MatrixXd vals = map.basis.values({geo.to_reference(point)});
  const double scale = 1.0 / std::sqrt(geo.det_jac);
  return {scale * vals.row(0).dot(c.head(m)), scale * vals.row(0).dot(c.tail(m))};
}

Eigen::Vector2d evaluate_vector(const StaggeredMesh& mesh, const DofMap& map,
                                const Eigen::VectorXd& x, const Eigen::Vector2d& point) {
  const int tri = mesh.locate(point);
  if (tri < 0)
    throw std::invalid_argument("evaluate_vector: point (" + std::to_string(point.x()) + ", " +
                                std::to_string(point.y()) + ") is outside the mesh");
  return evaluate_vector_on(mesh, map, x, tri, point);
}

}  // namespace sdg
