#include "core/problems.hpp"

#include <cmath>
#include <stdexcept>

namespace sdg {

namespace {

constexpr double kPi = 3.14159265358979323846;

ManufacturedSolution make_u1() {
  ManufacturedSolution s;
  s.id = "u1";
  s.value = [](double x, double y) { return std::sin(kPi * x) * std::sin(kPi * y); };
  s.gradient = [](double x, double y) {
    return Eigen::Vector2d(kPi * std::cos(kPi * x) * std::sin(kPi * y),
                           kPi * std::sin(kPi * x) * std::cos(kPi * y));
  };
  s.hessian = [](double x, double y) {
    Eigen::Matrix2d h;
    h(0, 0) = -kPi * kPi * std::sin(kPi * x) * std::sin(kPi * y);
    h(0, 1) = kPi * kPi * std::cos(kPi * x) * std::cos(kPi * y);
    h(1, 0) = h(0, 1);
    h(1, 1) = h(0, 0);
    return h;
  };
  return s;
}

// u2 = 10 x y^2 (1-x)(1-y) - e^{x-1} sin(pi x) sin(pi y) / 2
ManufacturedSolution make_u2() {
  ManufacturedSolution s;
  s.id = "u2";
  s.value = [](double x, double y) {
    const double a = 10.0 * x * (1.0 - x) * y * y * (1.0 - y);
    const double b = 0.5 * std::exp(x - 1.0) * std::sin(kPi * x) * std::sin(kPi * y);
    return a - b;
  };
  s.gradient = [](double x, double y) {
    const double ax = 10.0 * (1.0 - 2.0 * x) * y * y * (1.0 - y);
    const double ay = 10.0 * x * (1.0 - x) * (2.0 * y - 3.0 * y * y);
    const double e = std::exp(x - 1.0);
    const double bx = 0.5 * e * (std::sin(kPi * x) + kPi * std::cos(kPi * x)) * std::sin(kPi * y);
    const double by = 0.5 * e * std::sin(kPi * x) * kPi * std::cos(kPi * y);
    return Eigen::Vector2d(ax - bx, ay - by);
  };
  s.hessian = [](double x, double y) {
    const double axx = -20.0 * y * y * (1.0 - y);
    const double axy = 10.0 * (1.0 - 2.0 * x) * (2.0 * y - 3.0 * y * y);
    const double ayy = 10.0 * x * (1.0 - x) * (2.0 - 6.0 * y);
    const double e = std::exp(x - 1.0);
    const double sx = std::sin(kPi * x), cx = std::cos(kPi * x);
    const double sy = std::sin(kPi * y), cy = std::cos(kPi * y);
    const double bxx = 0.5 * e * (sx + 2.0 * kPi * cx - kPi * kPi * sx) * sy;
    const double bxy = 0.5 * e * (sx + kPi * cx) * kPi * cy;
    const double byy = -0.5 * e * sx * kPi * kPi * sy;
    Eigen::Matrix2d h;
    h(0, 0) = axx - bxx;
    h(0, 1) = axy - bxy;
    h(1, 0) = h(0, 1);
    h(1, 1) = ayy - byy;
    return h;
  };
  return s;
}

double guarded_norm(const Eigen::Vector2d& g, double eps_reg) {
  return std::max(g.norm(), eps_reg);
}

}  // namespace

ManufacturedSolution make_solution(const std::string& id) {
  if (id == "u1") return make_u1();
  if (id == "u2") return make_u2();
  throw std::invalid_argument("make_solution: unknown solution id '" + id + "' (expected u1|u2)");
}

Coefficient make_coefficient(const std::string& id, double eps_reg) {
  if (eps_reg < 0) throw std::invalid_argument("make_coefficient: eps_reg must be >= 0");
  Coefficient c;
  c.id = id;
  if (id == "rho1") {
    // 2 + 1/(1+|G|)
    c.rho = [](const Eigen::Vector2d& g) { return 2.0 + 1.0 / (1.0 + g.norm()); };
    c.grad_rho = [eps_reg](const Eigen::Vector2d& g) {
      const double n = guarded_norm(g, eps_reg);
      const double d = 1.0 + g.norm();
      return Eigen::Vector2d(-g / (n * d * d));
    };
    c.smooth_at_zero = false;
    c.rho_at_zero = 3.0;
  } else if (id == "rho2") {
    // 1 + exp(-|G|)
    c.rho = [](const Eigen::Vector2d& g) { return 1.0 + std::exp(-g.norm()); };
    c.grad_rho = [eps_reg](const Eigen::Vector2d& g) {
      const double n = guarded_norm(g, eps_reg);
      return Eigen::Vector2d(-std::exp(-g.norm()) * g / n);
    };
    c.smooth_at_zero = false;
    c.rho_at_zero = 2.0;
  } else if (id == "rho3") {
    // 1 + exp(-|G|^2)
    c.rho = [](const Eigen::Vector2d& g) { return 1.0 + std::exp(-g.squaredNorm()); };
    c.grad_rho = [](const Eigen::Vector2d& g) {
      return Eigen::Vector2d(-2.0 * std::exp(-g.squaredNorm()) * g);
    };
    c.smooth_at_zero = true;
    c.rho_at_zero = 2.0;
  } else if (id == "rho4") {
    // 1/sqrt(1+|G|)
    c.rho = [](const Eigen::Vector2d& g) { return 1.0 / std::sqrt(1.0 + g.norm()); };
    c.grad_rho = [eps_reg](const Eigen::Vector2d& g) {
      const double n = guarded_norm(g, eps_reg);
      const double d = 1.0 + g.norm();
      return Eigen::Vector2d(-0.5 * g / (n * d * std::sqrt(d)));
    };
    c.smooth_at_zero = false;
    c.rho_at_zero = 1.0;
  } else if (id == "rho5") {
    // |G|
    c.rho = [](const Eigen::Vector2d& g) { return g.norm(); };
    c.grad_rho = [eps_reg](const Eigen::Vector2d& g) {
      return Eigen::Vector2d(g / guarded_norm(g, eps_reg));
    };
    c.smooth_at_zero = false;
    c.rho_at_zero = 0.0;
  } else if (id == "rho6") {
    // |G|^2
    c.rho = [](const Eigen::Vector2d& g) { return g.squaredNorm(); };
    c.grad_rho = [](const Eigen::Vector2d& g) { return Eigen::Vector2d(2.0 * g); };
    c.smooth_at_zero = true;
    c.rho_at_zero = 0.0;
  } else {
    throw std::invalid_argument("make_coefficient: unknown coefficient id '" + id +
                                "' (expected rho1..rho6)");
  }
  return c;
}

Coefficient make_constant_coefficient(double value) {
  if (!(value > 0)) throw std::invalid_argument("make_constant_coefficient: value must be positive");
  Coefficient c;
  c.id = "const";
  c.rho = [value](const Eigen::Vector2d&) { return value; };
  c.grad_rho = [](const Eigen::Vector2d&) { return Eigen::Vector2d::Zero().eval(); };
  c.smooth_at_zero = true;
  c.rho_at_zero = value;
  return c;
}

std::vector<std::string> solution_ids() { return {"u1", "u2"}; }

std::vector<std::string> coefficient_ids() {
  return {"rho1", "rho2", "rho3", "rho4", "rho5", "rho6"};
}

std::function<double(double, double)> make_forcing(const ManufacturedSolution& solution,
                                                   const Coefficient& coefficient) {
  return [solution, coefficient](double x, double y) {
    const Eigen::Vector2d g = solution.gradient(x, y);
    const Eigen::Matrix2d h = solution.hessian(x, y);
    const double laplacian = h.trace();
    return -coefficient.rho(g) * laplacian - (h * coefficient.grad_rho(g)).dot(g);
  };
}

ProblemInstance make_problem(const std::string& solution_id, const std::string& coefficient_id,
                             double eps_reg) {
  ProblemInstance p;
  p.solution = make_solution(solution_id);
  p.coefficient = make_coefficient(coefficient_id, eps_reg);
  p.forcing = make_forcing(p.solution, p.coefficient);
  return p;
}

}  // namespace sdg
