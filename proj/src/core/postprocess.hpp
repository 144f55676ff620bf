#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "core/basis.hpp"
#include "core/dof_map.hpp"
#include "core/staggered_mesh.hpp"

namespace sdg {

/// Element-local reconstruction u*_h in P^{k+1}, one coefficient vector per
/// subtriangle in the orthonormal reference basis of degree k+1.
struct PostprocessedSolution {
  int degree = 0;  // k + 1
  PolynomialBasis basis;
  std::vector<Eigen::VectorXd> coeffs;
};

/// Solves the local reconstruction on one element: grad u* matches the
/// given gradient data weakly against all mean-zero P^{k+1} test functions,
/// and the mean of u* equals target_mean. The mean constraint enters as a
/// Lagrange multiplier row, which keeps the local system symmetric and
/// always solvable.
Eigen::VectorXd postprocess_local(const ElementGeometry& geo, const PolynomialBasis& basis,
                                  const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& grad_data,
                                  double target_mean, int quad_degree);

/// Postprocess a solved SDG state: u_hat in U^h, g_hat in W^h. Element
/// solves are independent; `threads` only controls how they are scheduled.
PostprocessedSolution postprocess(const StaggeredMesh& mesh, const DofMap& uh, const DofMap& wh,
                                  const Eigen::VectorXd& u_hat, const Eigen::VectorXd& g_hat,
                                  int quad_degree = -1, int threads = 0);

double evaluate_postprocessed_on(const StaggeredMesh& mesh, const PostprocessedSolution& star,
                                 int tri, const Eigen::Vector2d& point);

/// Mean of u*_h over a subtriangle (for conservation checks).
double postprocessed_mean(const StaggeredMesh& mesh, const PostprocessedSolution& star, int tri);

}  // namespace sdg
