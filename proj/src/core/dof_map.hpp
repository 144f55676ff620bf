#pragma once

#include <Eigen/Dense>
#include <vector>

#include "core/basis.hpp"
#include "core/staggered_mesh.hpp"

namespace sdg {

/// One macro element's share of a constrained space: an orthonormal basis of
/// the local constraint null space, plus the global indices of its dofs.
struct MacroBlock {
  std::vector<int> tris;       // member subtriangles, fixed order
  Eigen::MatrixXd null_basis;  // (tris.size() * local_dim) x n_dofs, orthonormal columns
  std::vector<int> global;     // dof column -> global index

  int n_dofs() const { return static_cast<int>(global.size()); }
};

/// Global degrees of freedom of U^h or W^h. The constraints (trace
/// continuity, boundary values) are eliminated macro element by macro
/// element, so a global coefficient vector expands to per-subtriangle
/// coefficients in the L2-orthonormal local basis through `null_basis`.
struct DofMap {
  int degree = 0;
  bool vector_valued = false;
  int local_dim = 0;  // per subtriangle: dim P^k, doubled for vector fields
  int n_global = 0;
  PolynomialBasis basis;  // scalar reference basis of this degree
  std::vector<MacroBlock> macros;
  std::vector<int> tri_macro;
  std::vector<int> tri_slot;

  /// Rows of the macro null basis belonging to one subtriangle.
  Eigen::MatrixXd tri_restriction(int tri) const {
    const MacroBlock& mb = macros[tri_macro[tri]];
    return mb.null_basis.middleRows(static_cast<Eigen::Index>(tri_slot[tri]) * local_dim, local_dim);
  }

  /// Macro dof values of a global coefficient vector.
  Eigen::VectorXd gather(const MacroBlock& mb, const Eigen::VectorXd& x) const;

  /// Local (per-subtriangle) coefficients induced by a global vector.
  Eigen::VectorXd local_coeffs(int tri, const Eigen::VectorXd& x) const;

  /// Global coefficients of a function given by per-subtriangle local
  /// coefficients; exact when the function satisfies the constraints.
  Eigen::VectorXd project_local(const std::vector<Eigen::VectorXd>& local) const;
};

/// U^h: piecewise P^k, continuous across interior primal edges, zero trace
/// on the boundary. Built per second-type macro R(e).
DofMap build_dofmap_uh(const StaggeredMesh& mesh, int degree);

/// W^h: piecewise P^k vector fields with continuous normal component across
/// dual edges. Built per first-type macro S(nu).
DofMap build_dofmap_wh(const StaggeredMesh& mesh, int degree);

/// Point evaluation of discrete fields. The *_on variants take a known
/// containing subtriangle; the others locate it and throw if the point lies
/// outside the mesh.
double evaluate_scalar_on(const StaggeredMesh& mesh, const DofMap& map, const Eigen::VectorXd& x,
                          int tri, const Eigen::Vector2d& point);
double evaluate_scalar(const StaggeredMesh& mesh, const DofMap& map, const Eigen::VectorXd& x,
                       const Eigen::Vector2d& point);
Eigen::Vector2d evaluate_vector_on(const StaggeredMesh& mesh, const DofMap& map,
                                   const Eigen::VectorXd& x, int tri, const Eigen::Vector2d& point);
Eigen::Vector2d evaluate_vector(const StaggeredMesh& mesh, const DofMap& map,
                                const Eigen::VectorXd& x, const Eigen::Vector2d& point);

}  // namespace sdg
