#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace sdg {

/// Exponent pairs (a,b) of the monomials x^a y^b with a+b <= degree,
/// ordered by total degree, then by descending x power.
std::vector<std::pair<int, int>> monomial_exponents(int degree);

/// L2-orthonormal polynomial basis on the reference triangle, stored as
/// monomial coefficients: basis_i(x,y) = sum_j coeff(j,i) x^{a_j} y^{b_j}.
struct PolynomialBasis {
  int degree = 0;
  int dim = 0;
  std::vector<std::pair<int, int>> exponents;
  Eigen::MatrixXd coeff;

  /// Values at reference points; (n_points x dim).
  Eigen::MatrixXd values(const std::vector<Eigen::Vector2d>& pts) const;

  /// Reference-coordinate gradients at reference points; pair of
  /// (n_points x dim) matrices for d/dx and d/dy.
  std::pair<Eigen::MatrixXd, Eigen::MatrixXd> gradients(const std::vector<Eigen::Vector2d>& pts) const;
};

/// dim P^k = (k+1)(k+2)/2
int polynomial_space_dim(int degree);

PolynomialBasis orthonormal_triangle_basis(int degree);

}  // namespace sdg
