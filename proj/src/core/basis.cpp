#include "core/basis.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "core/quadrature.hpp"

namespace sdg {

int polynomial_space_dim(int degree) { return (degree + 1) * (degree + 2) / 2; }

std::vector<std::pair<int, int>> monomial_exponents(int degree) {
  std::vector<std::pair<int, int>> exps;
  exps.reserve(polynomial_space_dim(degree));
  for (int total = 0; total <= degree; ++total)
    for (int a = total; a >= 0; --a) exps.emplace_back(a, total - a);
  return exps;
}

namespace {

Eigen::MatrixXd monomial_values(const std::vector<std::pair<int, int>>& exps,
                                const std::vector<Eigen::Vector2d>& pts) {
  Eigen::MatrixXd vals(pts.size(), exps.size());
  for (size_t p = 0; p < pts.size(); ++p)
    for (size_t m = 0; m < exps.size(); ++m)
      vals(p, m) = std::pow(pts[p].x(), exps[m].first) * std::pow(pts[p].y(), exps[m].second);
  return vals;
}

}  // namespace

Eigen::MatrixXd PolynomialBasis::values(const std::vector<Eigen::Vector2d>& pts) const {
  return monomial_values(exponents, pts) * coeff;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> PolynomialBasis::gradients(
    const std::vector<Eigen::Vector2d>& pts) const {
  Eigen::MatrixXd dx(pts.size(), exponents.size());
  Eigen::MatrixXd dy(pts.size(), exponents.size());
  for (size_t p = 0; p < pts.size(); ++p) {
    for (size_t m = 0; m < exponents.size(); ++m) {
      const auto [a, b] = exponents[m];
      dx(p, m) = a == 0 ? 0.0 : a * std::pow(pts[p].x(), a - 1) * std::pow(pts[p].y(), b);
      dy(p, m) = b == 0 ? 0.0 : b * std::pow(pts[p].x(), a) * std::pow(pts[p].y(), b - 1);
    }
  }
  return {dx * coeff, dy * coeff};
}

PolynomialBasis orthonormal_triangle_basis(int degree) {
  if (degree < 0) throw std::invalid_argument("orthonormal_triangle_basis: negative degree");

  PolynomialBasis basis;
  basis.degree = degree;
  basis.dim = polynomial_space_dim(degree);
  basis.exponents = monomial_exponents(degree);

  Eigen::MatrixXd gram(basis.dim, basis.dim);
  for (int i = 0; i < basis.dim; ++i)
    for (int j = 0; j < basis.dim; ++j)
      gram(i, j) = reference_monomial_moment(basis.exponents[i].first + basis.exponents[j].first,
                                             basis.exponents[i].second + basis.exponents[j].second);

  // Repeated Cholesky orthonormalization; each pass squares the residual
  // left by the conditioning of the monomial Gram matrix, until the
  // representation's own rounding floor is reached.
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(basis.dim, basis.dim);
  Eigen::MatrixXd c = identity;
  Eigen::MatrixXd best = c;
  double best_dev = std::numeric_limits<double>::infinity();
  for (int pass = 0; pass < 4; ++pass) {
    const Eigen::MatrixXd g = c.transpose() * gram * c;
    const double dev = (g - identity).cwiseAbs().maxCoeff();
    if (dev < best_dev) {
      best_dev = dev;
      best = c;
    }
    if (dev < 1e-15) break;
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("orthonormal_triangle_basis: Gram matrix not positive definite");
    c = llt.matrixL().solve(c.transpose()).transpose();  // c <- c L^{-T}
  }
  basis.coeff = best;
  return basis;
}

}  // namespace sdg
