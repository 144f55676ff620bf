#include "core/newton.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <cstdio>

#include "core/norms.hpp"

namespace sdg {

void NewtonConfig::validate() const {
  if (!(tolerance > 0)) throw std::invalid_argument("newton: tolerance must be positive");
  if (max_iterations < 1) throw std::invalid_argument("newton: max_iterations must be >= 1");
  if (eps_reg < 0) throw std::invalid_argument("newton: eps_reg must be >= 0");
}

double successive_error(const StaggeredMesh& mesh, const DofMap& uh, const Eigen::VectorXd& u_prev,
                        const Eigen::VectorXd& u_next, StopNorm norm) {
  if (norm == StopNorm::Coefficient) return (u_next - u_prev).norm();
  return l2_norm_scalar(mesh, uh, u_next - u_prev);
}

namespace {

/// [M, -B^T; C, 0] with C = B blockdiag(M_s^{-1} F'_s).
SparseMat saddle_matrix(const SdgSystem& system, const SparseMat& c_block) {
  const int nw = system.n_w();
  const int nu = system.n_u();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(system.mass.nonZeros() + system.b.nonZeros() + c_block.nonZeros());
  for (int k = 0; k < system.mass.outerSize(); ++k)
    for (SparseMat::InnerIterator it(system.mass, k); it; ++it)
      triplets.emplace_back(it.row(), it.col(), it.value());
  for (int k = 0; k < system.b.outerSize(); ++k)
    for (SparseMat::InnerIterator it(system.b, k); it; ++it) {
      triplets.emplace_back(it.col(), nw + it.row(), -it.value());  // -B^T
      // structural zero keeps the pattern of J fixed across iterations
      triplets.emplace_back(nw + it.row(), it.col(), 0.0);
    }
  for (int k = 0; k < c_block.outerSize(); ++k)
    for (SparseMat::InnerIterator it(c_block, k); it; ++it)
      triplets.emplace_back(nw + it.row(), it.col(), it.value());
  SparseMat j(nw + nu, nw + nu);
  j.setFromTriplets(triplets.begin(), triplets.end());
  return j;
}

Eigen::VectorXd residual(const SdgSystem& system, const Coefficient& rho,
                         const Eigen::VectorXd& g_hat, const Eigen::VectorXd& u_hat) {
  const Eigen::VectorXd f_of_g =
      assemble_nonlinear_moment(*system.mesh, *system.wh, rho, g_hat, system.quad_degree);
  Eigen::VectorXd h(system.n_w() + system.n_u());
  h.head(system.n_w()) = system.mass * g_hat - system.b.transpose() * u_hat;
  h.tail(system.n_u()) = system.b * system.apply_mass_inverse(f_of_g) - system.load;
  return h;
}

}  // namespace

Eigen::VectorXd newton_residual(const SdgSystem& system, const Coefficient& rho,
                                const Eigen::VectorXd& g_hat, const Eigen::VectorXd& u_hat) {
  return residual(system, rho, g_hat, u_hat);
}

SparseMat newton_jacobian(const SdgSystem& system, const Coefficient& rho,
                          const Eigen::VectorXd& g_hat) {
  const auto fprime =
      assemble_nonlinear_derivative_blocks(*system.mesh, *system.wh, rho, g_hat, system.quad_degree);
  const SparseMat c_block = system.b * blocks_to_sparse(*system.wh, system.mass_inverse_times(fprime));
  return saddle_matrix(system, c_block);
}

namespace {

struct NewtonWorkspace {
  Eigen::SparseLU<SparseMat, Eigen::COLAMDOrdering<int>> lu;
  bool analyzed = false;

  Eigen::VectorXd solve(const SparseMat& j, const Eigen::VectorXd& rhs, int iteration) {
    if (!analyzed) {
      lu.analyzePattern(j);
      analyzed = true;
    }
    lu.factorize(j);
    if (lu.info() != Eigen::Success) throw SingularJacobianError(iteration);
    return lu.solve(rhs);
  }
};

void check_finite_state(const Eigen::VectorXd& h, const Eigen::VectorXd& g_hat,
                        const Eigen::VectorXd& u_hat, int iteration) {
  if (h.allFinite()) return;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "newton: non-finite residual at iteration %d (|G| = %.6g, |u| = %.6g)", iteration,
                g_hat.norm(), u_hat.norm());
  throw std::runtime_error(buf);
}

}  // namespace

void newton_step(const SdgSystem& system, const Coefficient& rho, Eigen::VectorXd& g_hat,
                 Eigen::VectorXd& u_hat) {
  NewtonWorkspace ws;
  const Eigen::VectorXd h = residual(system, rho, g_hat, u_hat);
  const Eigen::VectorXd delta = ws.solve(newton_jacobian(system, rho, g_hat), h, 0);
  g_hat -= delta.head(system.n_w());
  u_hat -= delta.tail(system.n_u());
}

SdgSolution newton_solve(const SdgSystem& system, const Coefficient& rho,
                         const NewtonConfig& config) {
  config.validate();
  const int nw = system.n_w();
  const int nu = system.n_u();

  SdgSolution sol;
  sol.gradient_hat = Eigen::VectorXd::Zero(nw);
  sol.u_hat = Eigen::VectorXd::Zero(nu);

  NewtonWorkspace ws;
  if (config.initial_guess == InitialGuess::LinearizedSolve) {
    // linear SDG solve with rho frozen at rho(0) (or 1 when rho(0) = 0)
    const double rho0 = rho.rho_at_zero > 0 ? rho.rho_at_zero : 1.0;
    const SparseMat c_block = rho0 * system.b;
    NewtonWorkspace linear_ws;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nw + nu);
    rhs.tail(nu) = system.load;
    const Eigen::VectorXd x0 = linear_ws.solve(saddle_matrix(system, c_block), rhs, 0);
    sol.gradient_hat = x0.head(nw);
    sol.u_hat = x0.tail(nu);
  }

  NewtonReport& report = sol.report;
  for (int iter = 0; iter < config.max_iterations; ++iter) {
    const Eigen::VectorXd h = residual(system, rho, sol.gradient_hat, sol.u_hat);
    check_finite_state(h, sol.gradient_hat, sol.u_hat, iter);
    const double h_norm = h.norm();

    const Eigen::VectorXd delta = ws.solve(newton_jacobian(system, rho, sol.gradient_hat), h, iter);

    double step = 1.0;
    Eigen::VectorXd g_next = sol.gradient_hat - delta.head(nw);
    Eigen::VectorXd u_next = sol.u_hat - delta.tail(nu);
    if (config.line_search) {
      for (int halving = 0; halving < 8; ++halving) {
        const Eigen::VectorXd h_next = residual(system, rho, g_next, u_next);
        if (h_next.allFinite() && h_next.norm() <= (1.0 - 1e-4 * step) * h_norm) break;
        step *= 0.5;
        g_next = sol.gradient_hat - step * delta.head(nw);
        u_next = sol.u_hat - step * delta.tail(nu);
      }
    }

    const double err =
        successive_error(*system.mesh, *system.uh, sol.u_hat, u_next, config.stop_norm);
    sol.gradient_hat = std::move(g_next);
    sol.u_hat = std::move(u_next);

    report.residual_norms.push_back(h_norm);
    report.successive_errors.push_back(err);
    report.iterations = iter + 1;
    if (err < config.tolerance) {
      report.converged = true;
      break;
    }
  }
  if (!report.converged) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "no convergence within %d iterations (last successive error %.3e)",
                  config.max_iterations, report.successive_errors.back());
    report.failure = buf;
  }

  const Eigen::VectorXd f_of_g =
      assemble_nonlinear_moment(*system.mesh, *system.wh, rho, sol.gradient_hat, system.quad_degree);
  sol.flux_hat = system.apply_mass_inverse(f_of_g);
  return sol;
}

}  // namespace sdg
