// Test-only oracles, independent of the library's quadrature/assembly path:
// exact polynomial integration via closed-form monomial moments, reference
// re-implementations of the model problems over complex scalars for
// complex-step differentiation, and projection helpers.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "core/basis.hpp"
#include "core/dof_map.hpp"
#include "core/quadrature.hpp"
#include "core/staggered_mesh.hpp"

namespace sdg::testing {

/// Sparse bivariate polynomial with exact integration over triangles and
/// segments through closed-form moments.
class Poly2 {
 public:
  Poly2() = default;
  explicit Poly2(double c) { if (c != 0) coeffs_[{0, 0}] = c; }
  static Poly2 monomial(int a, int b, double c = 1.0) {
    Poly2 p;
    if (c != 0) p.coeffs_[{a, b}] = c;
    return p;
  }

  Poly2& operator+=(const Poly2& other) {
    for (const auto& [e, c] : other.coeffs_) coeffs_[e] += c;
    return *this;
  }
  friend Poly2 operator+(Poly2 a, const Poly2& b) { return a += b; }
  friend Poly2 operator*(const Poly2& a, const Poly2& b) {
    Poly2 r;
    for (const auto& [ea, ca] : a.coeffs_)
      for (const auto& [eb, cb] : b.coeffs_)
        r.coeffs_[{ea.first + eb.first, ea.second + eb.second}] += ca * cb;
    return r;
  }
  friend Poly2 operator*(double s, Poly2 p) {
    for (auto& [e, c] : p.coeffs_) c *= s;
    return p;
  }

  Poly2 pow(int n) const {
    Poly2 r(1.0);
    for (int i = 0; i < n; ++i) r = r * (*this);
    return r;
  }

  double eval(double x, double y) const {
    double v = 0;
    for (const auto& [e, c] : coeffs_) v += c * std::pow(x, e.first) * std::pow(y, e.second);
    return v;
  }

  Poly2 dx() const {
    Poly2 r;
    for (const auto& [e, c] : coeffs_)
      if (e.first > 0) r.coeffs_[{e.first - 1, e.second}] += c * e.first;
    return r;
  }
  Poly2 dy() const {
    Poly2 r;
    for (const auto& [e, c] : coeffs_)
      if (e.second > 0) r.coeffs_[{e.first, e.second - 1}] += c * e.second;
    return r;
  }

  /// Substitute x -> px, y -> py (each an affine/linear Poly2 in new vars).
  Poly2 substitute(const Poly2& px, const Poly2& py) const {
    Poly2 r;
    for (const auto& [e, c] : coeffs_) r += c * (px.pow(e.first) * py.pow(e.second));
    return r;
  }

  /// Exact integral over the reference triangle.
  double integrate_reference() const {
    double v = 0;
    for (const auto& [e, c] : coeffs_) v += c * reference_monomial_moment(e.first, e.second);
    return v;
  }

  /// Exact integral over a physical triangle.
  double integrate_triangle(const ElementGeometry& geo) const {
    const Poly2 px = Poly2(geo.origin.x()) + monomial(1, 0, geo.jac(0, 0)) + monomial(0, 1, geo.jac(0, 1));
    const Poly2 py = Poly2(geo.origin.y()) + monomial(1, 0, geo.jac(1, 0)) + monomial(0, 1, geo.jac(1, 1));
    return geo.det_jac * substitute(px, py).integrate_reference();
  }

  /// Exact integral along the segment a -> b (arc length measure).
  double integrate_segment(const Eigen::Vector2d& a, const Eigen::Vector2d& b) const {
    const Poly2 px = Poly2(a.x()) + monomial(1, 0, b.x() - a.x());
    const Poly2 py = Poly2(a.y()) + monomial(1, 0, b.y() - a.y());
    const Poly2 line = substitute(px, py);  // polynomial in t = x-exponent
    double v = 0;
    for (const auto& [e, c] : line.coeffs_) v += c / (e.first + 1);  // int_0^1 t^k dt
    return (b - a).norm() * v;
  }

 private:
  std::map<std::pair<int, int>, double> coeffs_;
};

/// Local basis function l of `map` on subtriangle `tri`, as an exact
/// polynomial in physical coordinates (scalar component only).
inline Poly2 local_basis_poly(const StaggeredMesh& mesh, const DofMap& map, int tri, int l) {
  const ElementGeometry geo = mesh.geometry(tri);
  const Eigen::Matrix2d inv_jac = geo.jac.inverse();
  // reference coordinates as affine polynomials in (x, y)
  Poly2 xi = Poly2(-inv_jac(0, 0) * geo.origin.x() - inv_jac(0, 1) * geo.origin.y()) +
             Poly2::monomial(1, 0, inv_jac(0, 0)) + Poly2::monomial(0, 1, inv_jac(0, 1));
  Poly2 eta = Poly2(-inv_jac(1, 0) * geo.origin.x() - inv_jac(1, 1) * geo.origin.y()) +
              Poly2::monomial(1, 0, inv_jac(1, 0)) + Poly2::monomial(0, 1, inv_jac(1, 1));
  Poly2 result;
  for (int m = 0; m < map.basis.dim; ++m) {
    const auto [a, b] = map.basis.exponents[m];
    result += map.basis.coeff(m, l) * (xi.pow(a) * eta.pow(b));
  }
  return (1.0 / std::sqrt(geo.det_jac)) * result;
}

/// Reference implementations of the manufactured solutions and coefficients
/// over an arbitrary scalar (used with complex step h = 1e-100 i to get
/// machine-precision derivatives on an independent code path).
template <typename T>
struct Ref {
  static T u1(T x, T y) { return sin(T(M_PI) * x) * sin(T(M_PI) * y); }
  static std::array<T, 2> grad_u1(T x, T y) {
    const T pi(M_PI);
    return {pi * cos(pi * x) * sin(pi * y), pi * sin(pi * x) * cos(pi * y)};
  }
  static T u2(T x, T y) {
    const T pi(M_PI);
    return T(10) * x * y * y * (T(1) - x) * (T(1) - y) - exp(x - T(1)) * sin(pi * x) * sin(pi * y) / T(2);
  }
  static std::array<T, 2> grad_u2(T x, T y) {
    const T pi(M_PI);
    const T ax = T(10) * (T(1) - T(2) * x) * y * y * (T(1) - y);
    const T ay = T(10) * x * (T(1) - x) * (T(2) * y - T(3) * y * y);
    const T e = exp(x - T(1));
    const T bx = (e * (sin(pi * x) + pi * cos(pi * x)) * sin(pi * y)) / T(2);
    const T by = (e * sin(pi * x) * pi * cos(pi * y)) / T(2);
    return {ax - bx, ay - by};
  }
  // |G| as sqrt(G.G): analytic away from zero, valid for complex step
  static T gnorm(const std::array<T, 2>& g) { return sqrt(g[0] * g[0] + g[1] * g[1]); }
  static T rho(const std::string& id, const std::array<T, 2>& g) {
    if (id == "rho1") return T(2) + T(1) / (T(1) + gnorm(g));
    if (id == "rho2") return T(1) + exp(-gnorm(g));
    if (id == "rho3") return T(1) + exp(-(g[0] * g[0] + g[1] * g[1]));
    if (id == "rho4") return T(1) / sqrt(T(1) + gnorm(g));
    if (id == "rho5") return gnorm(g);
    if (id == "rho6") return g[0] * g[0] + g[1] * g[1];
    throw std::invalid_argument("Ref::rho: unknown id " + id);
  }
  static std::array<T, 2> grad(const std::string& sol, T x, T y) {
    if (sol == "u1") return grad_u1(x, y);
    if (sol == "u2") return grad_u2(x, y);
    throw std::invalid_argument("Ref::grad: unknown id " + sol);
  }
  /// Flux component c of rho(grad u) grad u.
  static T flux(const std::string& sol, const std::string& rho_id, T x, T y, int c) {
    const auto g = grad(sol, x, y);
    return rho(rho_id, g) * g[c];
  }
};

/// f = -div(rho(grad u) grad u) by complex-step differentiation of the flux.
inline double forcing_oracle(const std::string& sol, const std::string& rho_id, double x, double y) {
  using C = std::complex<double>;
  const double h = 1e-100;
  const C dux = Ref<C>::flux(sol, rho_id, C(x, h), C(y, 0), 0);
  const C duy = Ref<C>::flux(sol, rho_id, C(x, 0), C(y, h), 1);
  return -(dux.imag() + duy.imag()) / h;
}

/// Global U^h coefficients of a function: local L2 projection per element
/// (exact for piecewise-P^k data) mapped through the macro null spaces.
inline Eigen::VectorXd project_scalar(const StaggeredMesh& mesh, const DofMap& uh,
                                      const std::function<double(double, double)>& f,
                                      int quad_degree) {
  const QuadratureRule rule = triangle_rule(quad_degree);
  const Eigen::MatrixXd ref_vals = uh.basis.values(rule.points);
  std::vector<Eigen::VectorXd> local(mesh.n_tris());
  for (int tri = 0; tri < mesh.n_tris(); ++tri) {
    const ElementGeometry geo = mesh.geometry(tri);
    const double scale = 1.0 / std::sqrt(geo.det_jac);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(uh.basis.dim);
    for (int q = 0; q < rule.size(); ++q) {
      const Eigen::Vector2d p = geo.to_physical(rule.points[q]);
      c += rule.weights[q] * geo.det_jac * f(p.x(), p.y()) * scale * ref_vals.row(q).transpose();
    }
    local[tri] = c;
  }
  return uh.project_local(local);
}

inline Eigen::VectorXd project_vector(const StaggeredMesh& mesh, const DofMap& wh,
                                      const std::function<Eigen::Vector2d(double, double)>& f,
                                      int quad_degree) {
  const QuadratureRule rule = triangle_rule(quad_degree);
  const Eigen::MatrixXd ref_vals = wh.basis.values(rule.points);
  std::vector<Eigen::VectorXd> local(mesh.n_tris());
  const int m = wh.basis.dim;
  for (int tri = 0; tri < mesh.n_tris(); ++tri) {
    const ElementGeometry geo = mesh.geometry(tri);
    const double scale = 1.0 / std::sqrt(geo.det_jac);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(2 * m);
    for (int q = 0; q < rule.size(); ++q) {
      const Eigen::Vector2d p = geo.to_physical(rule.points[q]);
      const Eigen::Vector2d v = f(p.x(), p.y());
      c.head(m) += rule.weights[q] * geo.det_jac * v.x() * scale * ref_vals.row(q).transpose();
      c.tail(m) += rule.weights[q] * geo.det_jac * v.y() * scale * ref_vals.row(q).transpose();
    }
    local[tri] = c;
  }
  return wh.project_local(local);
}

inline Eigen::VectorXd random_vector(int size, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd v(size);
  for (int i = 0; i < size; ++i) v(i) = dist(gen);
  return v;
}

}  // namespace sdg::testing
