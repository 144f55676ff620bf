#pragma once

#include <Eigen/Dense>
#include <vector>

namespace sdg {

/// Gauss-Legendre rule on [0,1]. Exact for polynomials of degree <= 2n-1.
struct GaussRule1d {
  std::vector<double> points;
  std::vector<double> weights;  // sum to 1
};

GaussRule1d gauss_legendre_01(int n_points);

/// Quadrature on the reference triangle {(x,y) : x >= 0, y >= 0, x + y <= 1}.
/// Weights are strictly positive and sum to the reference area 1/2.
struct QuadratureRule {
  int exactness = 0;
  std::vector<Eigen::Vector2d> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(points.size()); }
};

/// Rule exact for all polynomials of total degree <= `exactness_degree`,
/// built as a collapsed Gauss product (positive weights at any degree).
QuadratureRule triangle_rule(int exactness_degree);

/// Closed-form moment: integral of x^a y^b over the reference triangle,
/// equal to a! b! / (a+b+2)!.
double reference_monomial_moment(int a, int b);

}  // namespace sdg
