#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace bubblefield {

inline constexpr int kSpaceDimension = 5;

using Point = std::array<double, kSpaceDimension>;

/// The interaction constant 128√5/(7π) in its printed closed form.
double kappa_closed_form();

/// K ≥ 2 pairwise distinct bubble centers in ℝ⁵ with their cached distance
/// matrix. Immutable after construction; every downstream module reads
/// distances from here instead of recomputing them.
class Configuration {
 public:
  /// Throws TooFewPoints, BadDimension or DuplicatePoints.
  static Configuration from_points(std::span<const std::vector<double>> points);
  static Configuration from_points(std::span<const Point> points);

  int size() const { return static_cast<int>(points_.size()); }
  const std::vector<Point>& points() const { return points_; }
  const Eigen::MatrixXd& distances() const { return dist_; }
  double distance(int j, int k) const { return dist_(j, k); }

 private:
  explicit Configuration(std::vector<Point> points);

  std::vector<Point> points_;
  Eigen::MatrixXd dist_;
};

Configuration build_configuration(std::span<const std::vector<double>> points);

/// Symmetric coupling matrix m_jk = κ|z_j − z_k|⁻³ with zero diagonal.
class InteractionMatrix {
 public:
  InteractionMatrix(const Configuration& config, double kappa);

  int size() const { return static_cast<int>(m_.rows()); }
  double kappa() const { return kappa_; }
  const Eigen::MatrixXd& matrix() const { return m_; }
  double operator()(int j, int k) const { return m_(j, k); }

 private:
  Eigen::MatrixXd m_;
  double kappa_;
};

InteractionMatrix interaction_matrix(const Configuration& config, double kappa);

}  // namespace bubblefield
