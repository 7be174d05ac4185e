#include "bubblefield/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "bubblefield/error.hpp"

namespace bubblefield {
namespace {

// Accepts x when ‖r‖∞ ≤ tol·(1 + ‖6x‖∞). The second condition excludes the
// trivial root: near x = 0 the residual is ≈ 6x, so it is never small
// relative to the linear term.
bool converged(const Eigen::VectorXd& x, const Eigen::VectorXd& r, double tol) {
  const double linear = 6.0 * x.cwiseAbs().maxCoeff();
  const double res = r.cwiseAbs().maxCoeff();
  return res <= tol * (1.0 + linear) && res <= 1e-6 * linear;
}

bool lexicographic_less(const Eigen::VectorXd& lhs, const Eigen::VectorXd& rhs) {
  return std::lexicographical_compare(lhs.data(), lhs.data() + lhs.size(),
                                      rhs.data(), rhs.data() + rhs.size());
}

}  // namespace

Eigen::VectorXd reduced_residual(const Eigen::VectorXd& x,
                                 const InteractionMatrix& m) {
  const Eigen::VectorXd cubes = x.array().cube().matrix();
  // m is symmetric with zero diagonal, so (mᵀ x³)_k = Σ_{j≠k} m_jk xⱼ³.
  return 6.0 * x - m.matrix().transpose() * cubes;
}

Eigen::MatrixXd reduced_jacobian(const Eigen::VectorXd& x,
                                 const InteractionMatrix& m) {
  const int k = m.size();
  Eigen::MatrixXd j(k, k);
  for (int col = 0; col < k; ++col) {
    const double x2 = x(col) * x(col);
    for (int row = 0; row < k; ++row) {
      j(row, col) = row == col ? 6.0 : -3.0 * m(row, col) * x2;
    }
  }
  return j;
}

Eigen::MatrixXd symmetrized_matrix(const Eigen::VectorXd& x,
                                   const InteractionMatrix& m) {
  const int k = m.size();
  for (int i = 0; i < k; ++i) {
    if (!(x(i) > 0.0)) {
      throw Error(ErrorKind::NonPositiveComponent,
                  "component " + std::to_string(i) + " is not positive");
    }
  }
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const double v = 3.0 * m(i, j) * x(i) * x(j);
      a(i, j) = v;
      a(j, i) = v;
    }
  }
  return a;
}

IsolationReport isolation_check(const ReducedSolution& sol,
                                const InteractionMatrix& m) {
  if (!(sol.residual_norm <= 1e-8)) {
    throw Error(ErrorKind::InvalidArgument,
                "isolation_check needs residual_norm <= 1e-8, got " +
                    std::to_string(sol.residual_norm));
  }
  IsolationReport report;
  report.a_matrix = symmetrized_matrix(sol.x, m);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(report.a_matrix,
                                                     Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorKind::SpectrumFailure, "symmetric eigensolver did not converge");
  }
  report.eigenvalues = eig.eigenvalues();

  const int k = m.size();
  double det = 1.0;
  double min_shift = std::numeric_limits<double>::infinity();
  for (int i = 0; i < k; ++i) {
    const double s = 6.0 - report.eigenvalues(i);
    det *= s;
    min_shift = std::min(min_shift, std::abs(s));
  }
  report.det_shift = det;
  report.min_abs_shift_eigenvalue = min_shift;

  const Eigen::VectorXd u = sol.x.array().square().matrix();
  report.eig18_residual = (report.a_matrix * u - 18.0 * u).norm() / u.norm();
  report.isolated = std::abs(det) > 1e-8 * std::pow(6.0, k);

  if (k == 3) {
    const auto& ev = report.eigenvalues;
    report.k3_sign_pattern =
        ev(0) <= ev(1) && ev(1) < 0.0 && std::abs(ev(2) - 18.0) <= 1e-7;
  }
  return report;
}

double symmetric_seed(const InteractionMatrix& m) {
  const double mean_row_sum = m.matrix().rowwise().sum().mean();
  return std::sqrt(6.0 / mean_row_sum);
}

std::optional<ReducedSolution> newton_solve(const InteractionMatrix& m,
                                            Eigen::VectorXd x,
                                            const SolverOptions& options) {
  if (x.size() != m.size() || (x.array() <= 0.0).any() || !x.allFinite()) {
    return std::nullopt;
  }
  Eigen::VectorXd r = reduced_residual(x, m);
  double merit = r.squaredNorm();

  for (int iter = 0; iter <= options.max_iterations; ++iter) {
    if (converged(x, r, options.tol)) {
      return ReducedSolution{x, r.cwiseAbs().maxCoeff()};
    }
    if (iter == options.max_iterations) break;

    // Rank-revealing solve: on non-isolated solution sets J is singular and
    // the minimum-norm step is the one that moves onto the set.
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(
        reduced_jacobian(x, m));
    cod.setThreshold(1e-12);
    const Eigen::VectorXd step = cod.solve(-r);
    if (!step.allFinite()) return std::nullopt;

    double t = 1.0;
    bool accepted = false;
    for (int h = 0; h <= options.max_halvings; ++h, t *= 0.5) {
      const Eigen::VectorXd trial = x + t * step;
      if ((trial.array() <= 0.0).any()) continue;
      const Eigen::VectorXd tr = reduced_residual(trial, m);
      const double trial_merit = tr.squaredNorm();
      if (trial_merit < merit) {
        x = trial;
        r = tr;
        merit = trial_merit;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // no decrease possible in floating point; accept if already converged
      if (converged(x, r, options.tol)) {
        return ReducedSolution{x, r.cwiseAbs().maxCoeff()};
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

std::vector<ReducedSolution> solve_equilibria(const InteractionMatrix& m,
                                              const SolverOptions& options) {
  const int k = m.size();
  const double xbar = symmetric_seed(m);

  std::vector<Eigen::VectorXd> starts;
  starts.push_back(Eigen::VectorXd::Constant(k, xbar));
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> exponent(-2.0, 2.0);
  for (int s = 0; s < options.random_starts; ++s) {
    Eigen::VectorXd start(k);
    for (int i = 0; i < k; ++i) start(i) = xbar * std::pow(10.0, exponent(rng));
    starts.push_back(std::move(start));
  }
  for (const auto& seed : options.seeds) {
    if (seed.size() != k) {
      throw Error(ErrorKind::InvalidArgument,
                  "user seed has length " + std::to_string(seed.size()) +
                      ", expected " + std::to_string(k));
    }
    starts.push_back(seed);
  }

  std::vector<ReducedSolution> found;
  for (const auto& start : starts) {
    if (auto sol = newton_solve(m, start, options)) found.push_back(std::move(*sol));
  }
  if (found.empty()) {
    throw Error(ErrorKind::NoSolutionFound,
                "no Newton start converged to a positive solution");
  }

  std::sort(found.begin(), found.end(), [](const auto& lhs, const auto& rhs) {
    return lexicographic_less(lhs.x, rhs.x);
  });
  std::vector<ReducedSolution> unique;
  for (auto& sol : found) {
    const bool duplicate = std::any_of(
        unique.begin(), unique.end(), [&](const ReducedSolution& kept) {
          return (kept.x - sol.x).cwiseAbs().maxCoeff() <= options.dedup_radius;
        });
    if (!duplicate) unique.push_back(std::move(sol));
  }
  return unique;
}

EquilibriumPoint lift(const ReducedSolution& sol) {
  EquilibriumPoint p;
  p.a = sol.x.array().square().matrix();
  p.c = 2.0 * p.a;
  return p;
}

EquilibriumPoint k2_closed_form(double distance, double kappa) {
  if (!(distance > 0.0)) {
    throw Error(ErrorKind::NonPositiveDistance, "distance must be positive");
  }
  if (!(kappa > 0.0)) {
    throw Error(ErrorKind::NonPositiveKappa, "kappa must be positive");
  }
  const double a = 6.0 * distance * distance * distance / kappa;
  return {Eigen::Vector2d::Constant(a), Eigen::Vector2d::Constant(2.0 * a)};
}

}  // namespace bubblefield
