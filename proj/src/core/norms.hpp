#pragma once

#include <Eigen/Dense>
#include <functional>

#include "core/dof_map.hpp"
#include "core/postprocess.hpp"
#include "core/staggered_mesh.hpp"

namespace sdg {

/// Quadrature degree used for error norms: high enough that the norm
/// quadrature error is negligible against the discretization error.
inline int error_quadrature_degree(int degree) { return 2 * degree + 6; }

/// L2 norm of the discrete field itself.
double l2_norm_scalar(const StaggeredMesh& mesh, const DofMap& map, const Eigen::VectorXd& x,
                      int quad_degree = -1);

/// || u_exact - u_h ||_L2
double l2_error_scalar(const StaggeredMesh& mesh, const DofMap& map, const Eigen::VectorXd& x,
                       const std::function<double(double, double)>& exact, int quad_degree = -1);

/// || V_exact - V_h ||_L2
double l2_error_vector(const StaggeredMesh& mesh, const DofMap& map, const Eigen::VectorXd& x,
                       const std::function<Eigen::Vector2d(double, double)>& exact,
                       int quad_degree = -1);

/// || u_exact - u*_h ||_L2 for the postprocessed solution.
double l2_error_postprocessed(const StaggeredMesh& mesh, const PostprocessedSolution& star,
                              const std::function<double(double, double)>& exact,
                              int quad_degree = -1);

/// Lagrange nodes of degree k on the reference triangle: the centroid for
/// k = 0, otherwise the equispaced simplex nodes (i/k, j/k), i + j <= k.
std::vector<Eigen::Vector2d> lagrange_nodes(int degree);

/// || I_h u_exact - u_h ||_L2, where I_h interpolates the exact field at the
/// elementwise Lagrange nodes. This is the error measure of the reference
/// convergence tables; it differs from the true L2 error by the
/// interpolation-vs-projection gap of the exact solution.
double interpolation_error_scalar(const StaggeredMesh& mesh, const DofMap& map,
                                  const Eigen::VectorXd& x,
                                  const std::function<double(double, double)>& exact);

double interpolation_error_postprocessed(const StaggeredMesh& mesh,
                                         const PostprocessedSolution& star,
                                         const std::function<double(double, double)>& exact);

/// Discrete norms for scalar fields: X (L2 plus interior primal edge
/// traces) and Z (broken H1 plus dual edge jumps).
struct UhNorms {
  double x = 0;
  double z = 0;
};
UhNorms discrete_norms_uh(const StaggeredMesh& mesh, const DofMap& uh, const Eigen::VectorXd& x,
                          int quad_degree = -1);

/// Discrete norms for vector fields: X' (L2 plus dual edge normal traces)
/// and Z' (broken divergence plus interior primal edge normal jumps).
struct WhNorms {
  double x_prime = 0;
  double z_prime = 0;
};
WhNorms discrete_norms_wh(const StaggeredMesh& mesh, const DofMap& wh, const Eigen::VectorXd& x,
                          int quad_degree = -1);

}  // namespace sdg
