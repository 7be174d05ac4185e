#include "bubblefield/config.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "bubblefield/error.hpp"

namespace bubblefield {

std::string_view error_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::TooFewPoints: return "TooFewPoints";
    case ErrorKind::BadDimension: return "BadDimension";
    case ErrorKind::DuplicatePoints: return "DuplicatePoints";
    case ErrorKind::NonPositiveKappa: return "NonPositiveKappa";
    case ErrorKind::NonPositiveDistance: return "NonPositiveDistance";
    case ErrorKind::NonPositiveComponent: return "NonPositiveComponent";
    case ErrorKind::BadIndex: return "BadIndex";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::EmptySet: return "EmptySet";
    case ErrorKind::WindowTooLarge: return "WindowTooLarge";
    case ErrorKind::OutOfWindow: return "OutOfWindow";
    case ErrorKind::NoSignChange: return "NoSignChange";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::UnknownKey: return "UnknownKey";
    case ErrorKind::QuadratureDiverged: return "QuadratureDiverged";
    case ErrorKind::SpectrumFailure: return "SpectrumFailure";
    case ErrorKind::NoSolutionFound: return "NoSolutionFound";
    case ErrorKind::NegativeAlpha: return "NegativeAlpha";
    case ErrorKind::AlphaCollapse: return "AlphaCollapse";
    case ErrorKind::StepUnderflow: return "StepUnderflow";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_numerical(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::QuadratureDiverged:
    case ErrorKind::SpectrumFailure:
    case ErrorKind::NoSolutionFound:
    case ErrorKind::NegativeAlpha:
    case ErrorKind::AlphaCollapse:
    case ErrorKind::StepUnderflow:
    case ErrorKind::NoSignChange:
    case ErrorKind::OutOfWindow:
      return true;
    default:
      return false;
  }
}

double kappa_closed_form() {
  return 128.0 * std::sqrt(5.0) / (7.0 * std::numbers::pi);
}

Configuration::Configuration(std::vector<Point> points)
    : points_(std::move(points)) {
  const int k = size();
  if (k < 2) {
    throw Error(ErrorKind::TooFewPoints,
                "need at least 2 points, got " + std::to_string(k));
  }
  double max_coord = 0.0;
  for (const auto& p : points_) {
    for (double c : p) {
      if (!std::isfinite(c)) {
        throw Error(ErrorKind::InvalidArgument, "non-finite coordinate");
      }
      max_coord = std::max(max_coord, std::abs(c));
    }
  }
  const double threshold = 1e-12 * (1.0 + max_coord);

  dist_ = Eigen::MatrixXd::Zero(k, k);
  for (int j = 0; j < k; ++j) {
    for (int l = j + 1; l < k; ++l) {
      double sq = 0.0;
      for (int d = 0; d < kSpaceDimension; ++d) {
        const double diff = points_[j][d] - points_[l][d];
        sq += diff * diff;
      }
      const double r = std::sqrt(sq);
      if (r < threshold) {
        throw Error(ErrorKind::DuplicatePoints,
                    "points " + std::to_string(j) + " and " +
                        std::to_string(l) + " coincide");
      }
      dist_(j, l) = r;
      dist_(l, j) = r;
    }
  }
}

Configuration Configuration::from_points(std::span<const Point> points) {
  return Configuration(std::vector<Point>(points.begin(), points.end()));
}

Configuration Configuration::from_points(
    std::span<const std::vector<double>> points) {
  if (points.size() < 2) {
    throw Error(ErrorKind::TooFewPoints, "need at least 2 points, got " +
                                             std::to_string(points.size()));
  }
  std::vector<Point> converted;
  converted.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != kSpaceDimension) {
      throw Error(ErrorKind::BadDimension,
                  "point " + std::to_string(i) + " has " +
                      std::to_string(points[i].size()) +
                      " coordinates, expected 5");
    }
    Point p{};
    std::copy(points[i].begin(), points[i].end(), p.begin());
    converted.push_back(p);
  }
  return Configuration(std::move(converted));
}

Configuration build_configuration(std::span<const std::vector<double>> points) {
  return Configuration::from_points(points);
}

InteractionMatrix::InteractionMatrix(const Configuration& config, double kappa)
    : kappa_(kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw Error(ErrorKind::NonPositiveKappa, "kappa must be positive");
  }
  const int k = config.size();
  m_ = Eigen::MatrixXd::Zero(k, k);
  for (int j = 0; j < k; ++j) {
    for (int l = j + 1; l < k; ++l) {
      const double r = config.distance(j, l);
      const double v = kappa / (r * r * r);
      m_(j, l) = v;
      m_(l, j) = v;
    }
  }
}

InteractionMatrix interaction_matrix(const Configuration& config,
                                     double kappa) {
  return InteractionMatrix(config, kappa);
}

}  // namespace bubblefield
