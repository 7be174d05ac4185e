#include "bubblefield/circulant.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "bubblefield/error.hpp"

namespace bubblefield::circulant {
namespace {

void check_r(int r) {
  if (r < 1 || r > 5) {
    throw Error(ErrorKind::BadIndex, "sigma index must be in 1..5, got " + std::to_string(r));
  }
}

double reduce_phase(double phase) {
  const double two_pi = 2.0 * std::numbers::pi;
  double p = std::fmod(phase, two_pi);
  if (p < 0.0) p += two_pi;
  return p;
}

}  // namespace

double theta() { return std::numbers::pi / 5.0; }

int cyclic_distance(int j, int k) {
  const int d = std::abs(j - k);
  return std::min(d, kPoints - d);
}

double sigma_sq(int r, double b) {
  check_r(r);
  const double s1 = std::sin(r * std::numbers::pi / 10.0);
  const double s2 = std::sin(r * std::numbers::pi / 5.0);
  return 4.0 * s1 * s1 + 4.0 * b * s2 * s2;
}

double sigma_sq_algebraic(int r, double b) {
  check_r(r);
  const double s5 = std::sqrt(5.0);
  switch (r) {
    case 1: return (3.0 - s5) / 2.0 + (5.0 - s5) / 2.0 * b;
    case 2: return (5.0 - s5) / 2.0 + (5.0 + s5) / 2.0 * b;
    case 3: return (3.0 + s5) / 2.0 + (5.0 + s5) / 2.0 * b;
    case 4: return (5.0 + s5) / 2.0 + (5.0 - s5) / 2.0 * b;
    default: return 4.0;
  }
}

double delta(int r, double b, double kappa) {
  return kappa * std::pow(sigma_sq(r, b), -1.5);
}

Configuration points_k10(double b) {
  if (!(b > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "B must be positive");
  }
  const double rb = std::sqrt(b);
  std::array<Point, kPoints> pts{};
  for (int k = 0; k < kPoints; ++k) {
    const double phi = k * theta();
    pts[k] = {std::cos(phi), std::sin(phi), rb * std::cos(2.0 * phi),
              rb * std::sin(2.0 * phi), 0.0};
  }
  return Configuration::from_points(std::span<const Point>(pts));
}

double circulant_eigenvalue(int m, double b, double kappa) {
  if (m < 0 || m > 9) {
    throw Error(ErrorKind::BadIndex, "mode index must be in 0..9, got " + std::to_string(m));
  }
  double sum = 0.0;
  for (int r = 1; r <= 4; ++r) {
    sum += delta(r, b, kappa) * std::cos(m * r * theta());
  }
  const double sign = m % 2 == 0 ? 1.0 : -1.0;
  return 2.0 * sum + sign * delta(5, b, kappa);
}

double solve_b0(double lo, double hi, double tol, double kappa) {
  auto f = [kappa](double b) { return circulant_eigenvalue(4, b, kappa); };
  double f_lo = f(lo);
  double f_hi = f(hi);
  if (!(lo < hi) || !(f_lo * f_hi < 0.0)) {
    throw Error(ErrorKind::NoSignChange,
                "lambda_4 does not change sign on the bracket");
  }
  const double a = lo, b = hi;
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    if (std::abs(f_mid) <= 0.25 * tol || mid <= lo || mid >= hi) break;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  // Newton polish; keeps the better iterate and never leaves the bracket.
  double best = mid;
  double f_best = std::abs(f(mid));
  double x = mid;
  for (int it = 0; it < 5; ++it) {
    const double h = 1e-6;
    const double slope = (f(x + h) - f(x - h)) / (2.0 * h);
    if (slope == 0.0) break;
    const double next = x - f(x) / slope;
    if (!(next > a && next < b)) break;
    x = next;
    const double fx = std::abs(f(x));
    if (fx < f_best) {
      best = x;
      f_best = fx;
    }
  }
  return best;
}

FamilyCoefficients family_coefficients(double lambda0, double lambda2) {
  if (!(lambda0 > 0.0) || !(lambda2 > 0.0)) {
    throw Error(ErrorKind::OutOfWindow, "lambda_0 and lambda_2 must be positive");
  }
  const double ratio = lambda0 / lambda2;
  if (!(ratio > 1.5 && ratio < 3.0)) {
    throw Error(ErrorKind::OutOfWindow,
                "lambda_0/lambda_2 = " + std::to_string(ratio) + " is outside (3/2, 3)");
  }
  const double a_sq = 12.0 / (5.0 * lambda2) - 6.0 / (5.0 * lambda0);
  const double b_sq = -8.0 / (5.0 * lambda2) + 24.0 / (5.0 * lambda0);
  return {std::sqrt(a_sq), std::sqrt(b_sq)};
}

CubeCoefficients cube_expansion(double a, double b) {
  return {a * a * a + 1.5 * a * b * b, 3.0 * a * a * b + 0.75 * b * b * b,
          1.5 * a * b * b, 0.25 * b * b * b};
}

CirculantFamily build_family(double kappa, double bracket_lo, double bracket_hi,
                             double tol) {
  CirculantFamily fam;
  fam.kappa = kappa;
  fam.theta = theta();
  fam.b0 = solve_b0(bracket_lo, bracket_hi, tol, kappa);
  for (int r = 1; r <= 5; ++r) {
    fam.sigma[r - 1] = std::sqrt(sigma_sq(r, fam.b0));
    fam.delta[r - 1] = delta(r, fam.b0, kappa);
  }
  for (int m = 0; m < kPoints; ++m) {
    fam.lambdas[m] = circulant_eigenvalue(m, fam.b0, kappa);
  }
  const auto [a, b] = family_coefficients(fam.lambdas[0], fam.lambdas[2]);
  fam.coeff_a = a;
  fam.coeff_b = b;
  return fam;
}

InteractionMatrix family_matrix(const CirculantFamily& fam) {
  return interaction_matrix(points_k10(fam.b0), fam.kappa);
}

namespace {

Eigen::VectorXd member_vector(double t, const CirculantFamily& fam) {
  Eigen::VectorXd x(kPoints);
  for (int k = 0; k < kPoints; ++k) {
    x(k) = fam.coeff_a + fam.coeff_b * std::cos(reduce_phase(t + 2.0 * k * fam.theta));
  }
  return x;
}

}  // namespace

ReducedSolution family_member(double t, const CirculantFamily& fam) {
  ReducedSolution sol;
  sol.x = member_vector(t, fam);
  // residual through the circulant structure: (Mx³)_k = Σ_j δ_{ρ(j,k)} xⱼ³
  const Eigen::VectorXd cubes = sol.x.array().cube().matrix();
  double worst = 0.0;
  for (int k = 0; k < kPoints; ++k) {
    double s = 0.0;
    for (int j = 0; j < kPoints; ++j) {
      if (j != k) s += fam.delta[cyclic_distance(j, k) - 1] * cubes(j);
    }
    worst = std::max(worst, std::abs(6.0 * sol.x(k) - s));
  }
  sol.residual_norm = worst;
  return sol;
}

Eigen::VectorXd family_tangent(double t, const CirculantFamily& fam) {
  Eigen::VectorXd dx(kPoints);
  for (int k = 0; k < kPoints; ++k) {
    dx(k) = -fam.coeff_b * std::sin(reduce_phase(t + 2.0 * k * fam.theta));
  }
  return dx;
}

double cube_balance_residual(const CirculantFamily& fam) {
  const auto c = cube_expansion(fam.coeff_a, fam.coeff_b);
  return std::max(std::abs(fam.lambdas[0] * c.a0 - 6.0 * fam.coeff_a),
                  std::abs(fam.lambdas[2] * c.a1 - 6.0 * fam.coeff_b));
}

double kernel_residual(const CirculantFamily& fam) {
  const Eigen::MatrixXd m = family_matrix(fam).matrix();
  Eigen::VectorXd vc(kPoints), vs(kPoints);
  for (int k = 0; k < kPoints; ++k) {
    vc(k) = std::cos(4.0 * k * fam.theta);
    vs(k) = std::sin(4.0 * k * fam.theta);
  }
  return std::max((m * vc).norm() / vc.norm(), (m * vs).norm() / vs.norm());
}

}  // namespace bubblefield::circulant
