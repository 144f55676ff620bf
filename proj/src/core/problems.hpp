#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

namespace sdg {

/// Analytic test solution with the derivatives the forcing construction
/// needs. All solutions vanish on the boundary of the unit square.
struct ManufacturedSolution {
  std::string id;
  std::function<double(double, double)> value;
  std::function<Eigen::Vector2d(double, double)> gradient;
  std::function<Eigen::Matrix2d(double, double)> hessian;
};

/// Diffusion coefficient rho as a function of the gradient, with its
/// G-derivative. Coefficients that are not differentiable at G = 0 carry a
/// regularized gradient: |G| is clamped from below by eps_reg there.
struct Coefficient {
  std::string id;
  std::function<double(const Eigen::Vector2d&)> rho;
  std::function<Eigen::Vector2d(const Eigen::Vector2d&)> grad_rho;
  bool smooth_at_zero = true;
  double rho_at_zero = 1.0;
};

ManufacturedSolution make_solution(const std::string& id);              // "u1" | "u2"
Coefficient make_coefficient(const std::string& id, double eps_reg = 1e-14);  // "rho1".."rho6"
Coefficient make_constant_coefficient(double value);

std::vector<std::string> solution_ids();
std::vector<std::string> coefficient_ids();

/// Forcing for -div(rho(grad u) grad u) = f by the chain rule:
/// f = -rho(g) * laplace(u) - (H * grad_rho(g)) . g with g = grad u, H = Hess u.
std::function<double(double, double)> make_forcing(const ManufacturedSolution& solution,
                                                   const Coefficient& coefficient);

struct ProblemInstance {
  ManufacturedSolution solution;
  Coefficient coefficient;
  std::function<double(double, double)> forcing;
};

ProblemInstance make_problem(const std::string& solution_id, const std::string& coefficient_id,
                             double eps_reg = 1e-14);

}  // namespace sdg
