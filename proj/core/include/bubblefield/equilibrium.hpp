#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "bubblefield/config.hpp"

namespace bubblefield {

/// Positive solution x of 6xₖ = Σ_{j≠k} m_jk xⱼ³ (xₖ = √aₖ).
struct ReducedSolution {
  Eigen::VectorXd x;
  double residual_norm = 0.0;  // max-norm of reduced_residual at x
};

/// A point of Eq(F): c = 2a, both positive.
struct EquilibriumPoint {
  Eigen::VectorXd a;
  Eigen::VectorXd c;
};

struct IsolationReport {
  Eigen::MatrixXd a_matrix;     // A_ij = 3 m_ij xᵢ xⱼ
  Eigen::VectorXd eigenvalues;  // ascending
  double det_shift = 0.0;       // det(6I − A)
  double min_abs_shift_eigenvalue = 0.0;  // min |6 − λᵢ|
  double eig18_residual = 0.0;  // ‖Au − 18u‖ / ‖u‖, u = x²
  bool isolated = false;
  // K = 3 only: λ₁ ≤ λ₂ < 0 and λ₃ = 18 (within 1e-7).
  std::optional<bool> k3_sign_pattern;
};

struct SolverOptions {
  double tol = 1e-12;           // relative to 1 + ‖6x‖∞
  double dedup_radius = 1e-6;   // max-norm on x
  int random_starts = 64;
  int max_iterations = 200;
  int max_halvings = 40;
  std::uint64_t seed = 0;
  std::vector<Eigen::VectorXd> seeds;  // user-supplied starts
};

/// 6xₖ − Σ_{j≠k} m_jk xⱼ³. Defined for any real x (the cube is odd).
Eigen::VectorXd reduced_residual(const Eigen::VectorXd& x,
                                 const InteractionMatrix& m);

/// ∂F_k/∂x_l: 6 on the diagonal, −3 m_kl x_l² off it.
Eigen::MatrixXd reduced_jacobian(const Eigen::VectorXd& x,
                                 const InteractionMatrix& m);

/// A with A_ij = 3 m_ij xᵢ xⱼ, so that diag(x) J diag(x)⁻¹ = 6I − A.
/// Throws NonPositiveComponent.
Eigen::MatrixXd symmetrized_matrix(const Eigen::VectorXd& x,
                                   const InteractionMatrix& m);

/// Spectrum of A at a solution and the isolation verdict
/// |det(6I − A)| > 1e-8·6^K. Requires sol.residual_norm ≤ 1e-8.
IsolationReport isolation_check(const ReducedSolution& sol,
                                const InteractionMatrix& m);

/// Damped-Newton multistart. Returned solutions are positive, carry their
/// residual, are deduplicated, and are sorted lexicographically on x.
/// Throws NoSolutionFound when every start fails.
std::vector<ReducedSolution> solve_equilibria(const InteractionMatrix& m,
                                              const SolverOptions& options = {});

/// Single damped-Newton run from `start`; nullopt if it does not converge
/// to a positive solution.
std::optional<ReducedSolution> newton_solve(const InteractionMatrix& m,
                                            Eigen::VectorXd start,
                                            const SolverOptions& options = {});

/// x̄ with 6x̄ = x̄³·(mean row sum of m).
double symmetric_seed(const InteractionMatrix& m);

EquilibriumPoint lift(const ReducedSolution& sol);

/// The K = 2 singleton: a = (6D³/κ)(1, 1), c = 2a. Throws NonPositiveDistance.
EquilibriumPoint k2_closed_form(double distance, double kappa);

}  // namespace bubblefield
