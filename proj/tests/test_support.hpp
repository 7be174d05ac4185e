#pragma once

// Independent oracles shared by the test suites. Nothing here calls into the
// code paths it is used to check.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "bubblefield/config.hpp"

namespace bubblefield::testing {

/// Central-difference Jacobian of f at x.
inline Eigen::MatrixXd fd_jacobian(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, double h) {
  const Eigen::Index n = x.size();
  const Eigen::VectorXd f0 = f(x);
  Eigen::MatrixXd j(f0.size(), n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    j.col(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return j;
}

/// Central-difference gradient of a scalar function.
inline Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x, double h) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

/// Brute-force κ|z_j − z_k|⁻³ straight from coordinates.
inline double pair_coupling(const std::vector<double>& zj, const std::vector<double>& zk,
                            double kappa) {
  double sq = 0.0;
  for (std::size_t d = 0; d < zj.size(); ++d) sq += (zj[d] - zk[d]) * (zj[d] - zk[d]);
  return kappa / std::pow(std::sqrt(sq), 3);
}

inline std::vector<std::vector<double>> random_points(std::mt19937_64& rng, int k,
                                                      double spread = 1.0) {
  std::uniform_real_distribution<double> u(-spread, spread);
  std::vector<std::vector<double>> pts(k, std::vector<double>(5));
  for (auto& p : pts) for (auto& c : p) c = u(rng);
  return pts;
}

/// Random orthogonal 5×5 matrix from the QR factors of a Gaussian matrix.
inline Eigen::Matrix<double, 5, 5> random_orthogonal(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Matrix<double, 5, 5> g;
  for (int i = 0; i < 5; ++i) for (int j = 0; j < 5; ++j) g(i, j) = n(rng);
  Eigen::HouseholderQR<Eigen::Matrix<double, 5, 5>> qr(g);
  return qr.householderQ();
}

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

}  // namespace bubblefield::testing
