#include "bubblefield/groundstate.hpp"

#include <random>

#include <gtest/gtest.h>

#include "bubblefield/config.hpp"
#include "bubblefield/error.hpp"
#include "test_support.hpp"

namespace bubblefield::groundstate {
namespace {

using testing::rel_diff;

// Reference values from 30-digit adaptive quadrature (mpmath) of the radial
// integrals over [0, ∞).
constexpr double kIntegralW73 = 4586.97761748894153496716834275;
constexpr double kNormLwSq = 17731.565560017509753569400216;
constexpr double kKappaIntegral = 22.542791097106278603518869736;
constexpr double kTailW73At100 = 0.651854181258682950762965122156;
constexpr double kTailW73At200 = 0.163284319539498265895175327821;
constexpr double kTailLwSqAt200 = 37.9355550883887780433193526844;

TEST(GroundStateTest, PointValues) {
  EXPECT_EQ(ground_state(0.0), 1.0);
  EXPECT_NEAR(ground_state(std::sqrt(15.0)), std::pow(2.0, -1.5), 1e-15);
  const double r = 1e4;
  EXPECT_LE(rel_diff(r * r * r * ground_state(r), std::pow(15.0, 1.5)), 1e-6);
}

TEST(GroundStateTest, StrictlyDecreasing) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  for (int i = 0; i < 1000; ++i) {
    double r1 = u(rng), r2 = u(rng);
    if (r1 == r2) continue;
    if (r1 > r2) std::swap(r1, r2);
    EXPECT_GT(ground_state(r1), ground_state(r2));
  }
}

TEST(GroundStateTest, SolvesRadialEquation) {
  // W'' + (4/r)W' + W^{7/3} = 0 on ℝ⁵
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.1, 50.0);
  for (int i = 0; i < 500; ++i) {
    const double r = u(rng);
    const double residual = ground_state_d2(r) + 4.0 / r * ground_state_d1(r) +
                            std::pow(ground_state(r), 7.0 / 3.0);
    EXPECT_LE(std::abs(residual), 1e-9) << "r=" << r;
  }
}

TEST(GroundStateTest, DerivativesMatchFiniteDifferences) {
  for (double r : {0.3, 1.0, 4.0, 12.0}) {
    const double h = 1e-5;
    EXPECT_NEAR(ground_state_d1(r), (ground_state(r + h) - ground_state(r - h)) / (2 * h), 1e-9);
    EXPECT_NEAR(ground_state_d2(r), (ground_state_d1(r + h) - ground_state_d1(r - h)) / (2 * h),
                1e-9);
  }
}

TEST(LambdaWTest, OriginAndScalingDerivative) {
  EXPECT_EQ(lambda_w(0.0), 1.5);
  // ΛW = −d/dλ [λ^{−3/2} W(r/λ)] at λ = 1
  for (double r : {0.5, 1.0, 5.0}) {
    const double h = 1e-5;
    auto scaled = [r](double l) { return std::pow(l, -1.5) * ground_state(r / l); };
    const double fd = -(scaled(1.0 + h) - scaled(1.0 - h)) / (2.0 * h);
    EXPECT_NEAR(lambda_w(r), fd, 1e-7) << "r=" << r;
  }
}

TEST(LambdaWTest, Asymptotics) {
  const double r = 1e4;
  EXPECT_LE(rel_diff(r * r * r * lambda_w(r), -1.5 * std::pow(15.0, 1.5)), 1e-5);
}

TEST(VerifyKappaTest, DefaultSpecIntegrals) {
  const auto report = verify_kappa();
  EXPECT_GT(report.integral_w73, 0.0);
  EXPECT_GT(report.norm_lw_sq, 0.0);
  // the first integral also has the Beta-function closed form Ω₄·15^{5/2}/5
  EXPECT_LE(rel_diff(report.integral_w73, unit_sphere_area() * std::pow(15.0, 2.5) / 5.0), 1e-12);
  EXPECT_LE(rel_diff(report.integral_w73, kIntegralW73), 1e-12);
  EXPECT_LE(rel_diff(report.norm_lw_sq, kNormLwSq), 1e-12);
  EXPECT_LE(rel_diff(report.kappa_quadrature, kKappaIntegral), 1e-12);
  EXPECT_DOUBLE_EQ(report.kappa_quadrature,
                   1.5 * std::pow(15.0, 1.5) * report.integral_w73 / report.norm_lw_sq);
  EXPECT_EQ(report.kappa_closed, kappa_closed_form());
  EXPECT_LE(report.refinement_error, 1e-12);
}

TEST(VerifyKappaTest, IntegralExpressionIsRootThreeTimesClosedForm) {
  // The integral expression evaluates to 128√15/(7π); the printed closed form
  // 128√5/(7π) differs from it by exactly √3.
  const auto report = verify_kappa();
  EXPECT_LE(rel_diff(report.kappa_quadrature, 128.0 * std::sqrt(15.0) / (7.0 * M_PI)), 1e-12);
  EXPECT_NEAR(report.rel_error, std::sqrt(3.0) - 1.0, 1e-12);
}

TEST(VerifyKappaTest, RefinementDoesNotIncreaseError) {
  QuadratureSpec coarse;
  coarse.n_panels = 64;
  QuadratureSpec fine = coarse;
  fine.n_panels = 128;
  const double e_coarse = rel_diff(verify_kappa(coarse).kappa_quadrature, kKappaIntegral);
  const double e_fine = rel_diff(verify_kappa(fine).kappa_quadrature, kKappaIntegral);
  EXPECT_LE(e_fine, 2.0 * e_coarse + 1e-15);
  EXPECT_LE(verify_kappa(fine).rel_error, 2.0 * verify_kappa(coarse).rel_error);
}

TEST(VerifyKappaTest, SimpsonRuleConverges) {
  QuadratureSpec spec;
  spec.rule = QuadratureRule::Simpson;
  spec.n_panels = 8192;
  EXPECT_LE(rel_diff(verify_kappa(spec).kappa_quadrature, kKappaIntegral), 1e-9);
}

TEST(VerifyKappaTest, AnalyticTails) {
  // four series terms leave an O(u⁴) truncation, u = 15/r²
  EXPECT_LE(rel_diff(tail_w73(100.0, 4), kTailW73At100), 1e-10);
  EXPECT_LT(rel_diff(tail_w73(100.0, 6), kTailW73At100), rel_diff(tail_w73(100.0, 4), kTailW73At100));
  EXPECT_LE(rel_diff(tail_w73(200.0, 4), kTailW73At200), 1e-12);
  EXPECT_LE(rel_diff(tail_lw_sq(200.0, 4), kTailLwSqAt200), 1e-12);
  // integrand ~ 15^{7/2} r^{-3}, so the tail scales like r_max^{-2} up to O(u)
  EXPECT_NEAR(tail_w73(100.0, 4) / tail_w73(200.0, 4), 4.0, 1e-2);
  // and the one-term tail is the leading power law exactly
  EXPECT_DOUBLE_EQ(tail_w73(200.0, 1), std::pow(15.0, 3.5) / (2.0 * 200.0 * 200.0));
}

TEST(VerifyKappaTest, TruncationWithoutTailWouldDominate) {
  const double omega = unit_sphere_area();
  const double no_tail = omega * radial_integral_lw_sq(200.0, 2048, QuadratureRule::GaussLegendre);
  EXPECT_GT(rel_diff(no_tail, kNormLwSq), 1e-3);
}

TEST(VerifyKappaTest, RejectsInvalidSpec) {
  QuadratureSpec spec;
  spec.r_max = 5.0;
  EXPECT_THROW(verify_kappa(spec), Error);
  spec = {};
  spec.n_panels = 8;
  EXPECT_THROW(verify_kappa(spec), Error);
  spec = {};
  spec.tail_order = 0;
  EXPECT_THROW(verify_kappa(spec), Error);
}

}  // namespace
}  // namespace bubblefield::groundstate
