#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <iosfwd>
#include <vector>

#include "core/dof_map.hpp"
#include "core/problems.hpp"
#include "core/staggered_mesh.hpp"

namespace sdg {

using SparseMat = Eigen::SparseMatrix<double>;

/// Interior quadrature default: exceeds 2(k+1) so the quadrature error on
/// nonlinear integrands stays below the discretization error.
inline int default_quadrature_degree(int degree) { return 2 * degree + 4; }

/// W^h mass matrix, integral of psi_j . psi_i. Block diagonal with one block
/// per first-type macro.
SparseMat assemble_mass(const StaggeredMesh& mesh, const DofMap& wh, int quad_degree = -1);

/// Dense per-macro mass blocks (aligned with wh.macros).
std::vector<Eigen::MatrixXd> assemble_mass_blocks(const StaggeredMesh& mesh, const DofMap& wh,
                                                  int quad_degree = -1);

/// B from b_h(V, v) = int V . grad_h v - sum over dual edges of
/// int (V.n) [v]; rows are U^h dofs, columns W^h dofs.
SparseMat assemble_b(const StaggeredMesh& mesh, const DofMap& uh, const DofMap& wh,
                     int quad_degree = -1);

/// B* from b_h*(v, V) = -int v div_h V + sum over interior primal edges of
/// int v [V.n]; same shape as B, assembled on an independent path. Equal to
/// B by discrete integration by parts.
SparseMat assemble_b_star(const StaggeredMesh& mesh, const DofMap& uh, const DofMap& wh,
                          int quad_degree = -1);

/// Moments of the forcing against the U^h basis.
Eigen::VectorXd assemble_load(const StaggeredMesh& mesh, const DofMap& uh,
                              const std::function<double(double, double)>& f, int quad_degree = -1);

/// Nonlinear moment vector F(G)_i = (rho(G_h) G_h, psi_i). Throws on a
/// non-finite coefficient value, reporting element and point.
Eigen::VectorXd assemble_nonlinear_moment(const StaggeredMesh& mesh, const DofMap& wh,
                                          const Coefficient& rho, const Eigen::VectorXd& g_hat,
                                          int quad_degree = -1);

/// Derivative F'(G)_ij = (rho(G)psi_j, psi_i) + ((grad_rho(G).psi_j) G, psi_i)
/// as dense per-macro blocks (same block sparsity as the mass matrix).
std::vector<Eigen::MatrixXd> assemble_nonlinear_derivative_blocks(const StaggeredMesh& mesh,
                                                                  const DofMap& wh,
                                                                  const Coefficient& rho,
                                                                  const Eigen::VectorXd& g_hat,
                                                                  int quad_degree = -1);

SparseMat assemble_nonlinear_derivative(const StaggeredMesh& mesh, const DofMap& wh,
                                        const Coefficient& rho, const Eigen::VectorXd& g_hat,
                                        int quad_degree = -1);

/// Scatters per-macro dense blocks into a sparse matrix over the map's
/// global indices.
SparseMat blocks_to_sparse(const DofMap& map, const std::vector<Eigen::MatrixXd>& blocks);

/// Assembled discrete operators of one mesh level, with cached per-block
/// mass factorizations for applying M^{-1}.
struct SdgSystem {
  const StaggeredMesh* mesh = nullptr;
  const DofMap* uh = nullptr;
  const DofMap* wh = nullptr;
  int quad_degree = 0;

  SparseMat mass;  // N_w x N_w
  SparseMat b;     // N_u x N_w
  Eigen::VectorXd load;

  std::vector<Eigen::MatrixXd> mass_blocks;
  std::vector<Eigen::LLT<Eigen::MatrixXd>> mass_llt;

  int n_u() const { return uh->n_global; }
  int n_w() const { return wh->n_global; }

  Eigen::VectorXd apply_mass_inverse(const Eigen::VectorXd& x) const;

  /// blockdiag(M_s^{-1} A_s) for per-macro blocks A.
  std::vector<Eigen::MatrixXd> mass_inverse_times(const std::vector<Eigen::MatrixXd>& blocks) const;
};

SdgSystem build_system(const StaggeredMesh& mesh, const DofMap& uh, const DofMap& wh,
                       const std::function<double(double, double)>& f, int quad_degree = -1);

/// Coordinate text dump, `i j value` per line, sorted by row then column.
void dump_matrix_coo(const SparseMat& matrix, std::ostream& out);

}  // namespace sdg
