#include "core/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace sdg {

GaussRule1d gauss_legendre_01(int n_points) {
  if (n_points < 1) throw std::invalid_argument("gauss_legendre_01: need at least one point");

  // Golub-Welsch: nodes are eigenvalues of the Jacobi matrix of the Legendre
  // recurrence, weights come from the first eigenvector components.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n_points, n_points);
  for (int i = 1; i < n_points; ++i) {
    const double b = i / std::sqrt(4.0 * i * i - 1.0);
    jacobi(i, i - 1) = b;
    jacobi(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  if (es.info() != Eigen::Success) throw std::runtime_error("gauss_legendre_01: eigensolve failed");

  GaussRule1d rule;
  rule.points.resize(n_points);
  rule.weights.resize(n_points);
  for (int i = 0; i < n_points; ++i) {
    rule.points[i] = 0.5 * (es.eigenvalues()(i) + 1.0);
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = v0 * v0;  // mu0 = 2 on [-1,1], halved by the map to [0,1]
  }
  return rule;
}

QuadratureRule triangle_rule(int exactness_degree) {
  if (exactness_degree < 0) throw std::invalid_argument("triangle_rule: negative exactness degree");
  const int d = exactness_degree;

  // Duffy map (x,y) = (s, t(1-s)) with Jacobian (1-s). A total-degree-d
  // polynomial becomes degree d+1 in s and degree d in t, so plain
  // Gauss-Legendre in each direction integrates it exactly.
  const int ns = (d + 3) / 2;  // 2*ns - 1 >= d + 1
  const int nt = (d + 2) / 2;  // 2*nt - 1 >= d
  const GaussRule1d gs = gauss_legendre_01(ns);
  const GaussRule1d gt = gauss_legendre_01(nt);

  QuadratureRule rule;
  rule.exactness = d;
  rule.points.reserve(static_cast<size_t>(ns) * nt);
  rule.weights.reserve(static_cast<size_t>(ns) * nt);
  for (int i = 0; i < ns; ++i) {
    const double s = gs.points[i];
    for (int j = 0; j < nt; ++j) {
      const double t = gt.points[j];
      rule.points.emplace_back(s, t * (1.0 - s));
      rule.weights.push_back(gs.weights[i] * gt.weights[j] * (1.0 - s));
    }
  }
  return rule;
}

double reference_monomial_moment(int a, int b) {
  if (a < 0 || b < 0) throw std::invalid_argument("reference_monomial_moment: negative exponent");
  // a! b! / (a+b+2)! = 1 / (C(a+b, a) * (a+b+1) * (a+b+2))
  double binom = 1.0;
  for (int i = 1; i <= a; ++i) binom *= static_cast<double>(b + i) / i;
  const double n = a + b;
  return 1.0 / (binom * (n + 1.0) * (n + 2.0));
}

}  // namespace sdg
