#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <stdexcept>
#include <string>
#include <vector>

#include "core/assembly.hpp"

namespace sdg {

enum class InitialGuess { LinearizedSolve, Zero };
enum class StopNorm { L2, Coefficient };

struct NewtonConfig {
  double tolerance = 1e-10;  // on the successive error of u_h
  int max_iterations = 100;
  InitialGuess initial_guess = InitialGuess::LinearizedSolve;
  double eps_reg = 1e-14;  // |G| guard for non-smooth coefficients
  StopNorm stop_norm = StopNorm::L2;
  bool line_search = false;  // simple halving backtracking on ||H||

  void validate() const;
};

struct NewtonReport {
  int iterations = 0;
  std::vector<double> successive_errors;  // one per iteration
  std::vector<double> residual_norms;     // ||H|| at the start of each iteration
  bool converged = false;
  std::string failure;  // set when not converged
};

struct SdgSolution {
  Eigen::VectorXd flux_hat;      // U
  Eigen::VectorXd gradient_hat;  // G
  Eigen::VectorXd u_hat;         // u
  NewtonReport report;
};

struct SingularJacobianError : std::runtime_error {
  int iteration;
  explicit SingularJacobianError(int iter)
      : std::runtime_error("newton: singular Jacobian at iteration " + std::to_string(iter)),
        iteration(iter) {}
};

/// Successive error between two U^h iterates: L2 norm of the difference
/// function, or the Euclidean norm of the coefficient difference.
double successive_error(const StaggeredMesh& mesh, const DofMap& uh, const Eigen::VectorXd& u_prev,
                        const Eigen::VectorXd& u_next, StopNorm norm = StopNorm::L2);

/// Residual H(x) = (M G - B^T u, B M^{-1} F(G) - f) of the reduced system.
Eigen::VectorXd newton_residual(const SdgSystem& system, const Coefficient& rho,
                                const Eigen::VectorXd& g_hat, const Eigen::VectorXd& u_hat);

/// Jacobian J = [M, -B^T; B M^{-1} F'(G), 0] of H.
SparseMat newton_jacobian(const SdgSystem& system, const Coefficient& rho,
                          const Eigen::VectorXd& g_hat);

/// One Newton update x - J(x)^{-1} H(x); exposed for testing.
void newton_step(const SdgSystem& system, const Coefficient& rho, Eigen::VectorXd& g_hat,
                 Eigen::VectorXd& u_hat);

/// Newton's method on the reduced system in (G, u). On convergence the flux
/// is recovered as U = M^{-1} F(G). Non-convergence within max_iterations is
/// reported, not thrown; singular Jacobians and non-finite values throw.
SdgSolution newton_solve(const SdgSystem& system, const Coefficient& rho,
                         const NewtonConfig& config = {});

}  // namespace sdg
