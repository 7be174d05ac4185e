#pragma once

#include <array>

#include <Eigen/Dense>

#include "bubblefield/config.hpp"
#include "bubblefield/equilibrium.hpp"

namespace bubblefield::circulant {

inline constexpr int kPoints = 10;

/// π/5, the angular step between consecutive points.
double theta();

/// Cyclic index distance min(|j−k|, 10−|j−k|).
int cyclic_distance(int j, int k);

/// σᵣ²(B) = 4 sin²(rπ/10) + 4B sin²(rπ/5), r = 1..5. Throws BadIndex.
double sigma_sq(int r, double b);
/// The same quantity from its closed algebraic form in √5.
double sigma_sq_algebraic(int r, double b);

/// δᵣ(B) = κ σᵣ(B)⁻³.
double delta(int r, double b, double kappa);

/// The ten points z_k(B) on two circles in ℝ⁵.
Configuration points_k10(double b);

/// λₘ(B) = 2Σ_{r=1}^{4} δᵣ cos(mrθ) + (−1)^m δ₅, m = 0..9. Throws BadIndex.
double circulant_eigenvalue(int m, double b, double kappa);

/// Root of λ₄ inside the bracket by bisection plus a Newton polish with a
/// finite-difference slope. Throws NoSignChange.
double solve_b0(double bracket_lo, double bracket_hi, double tol, double kappa);

/// a = √(12/(5λ₂) − 6/(5λ₀)), b = √(−8/(5λ₂) + 24/(5λ₀)).
/// Throws OutOfWindow unless λ₀, λ₂ > 0 and 3/2 < λ₀/λ₂ < 3.
struct FamilyCoefficients {
  double a = 0.0;
  double b = 0.0;
};
FamilyCoefficients family_coefficients(double lambda0, double lambda2);

/// (a + b cos t)³ = A₀ + A₁cos t + A₂cos 2t + A₃cos 3t.
struct CubeCoefficients {
  double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
};
CubeCoefficients cube_expansion(double a, double b);

struct CirculantFamily {
  double kappa = 0.0;
  double b0 = 0.0;
  double theta = 0.0;
  std::array<double, 5> sigma{};    // σᵣ(B₀)
  std::array<double, 5> delta{};    // δᵣ(B₀)
  std::array<double, kPoints> lambdas{};  // λₘ(B₀)
  double coeff_a = 0.0;
  double coeff_b = 0.0;
};

/// Solves for B₀ in (bracket_lo, bracket_hi) and fills every field.
/// Throws OutOfWindow if the invariants of the construction fail.
CirculantFamily build_family(double kappa, double bracket_lo = 4.70,
                             double bracket_hi = 4.71, double tol = 1e-12);

/// The interaction matrix M(B₀) of the family's configuration.
InteractionMatrix family_matrix(const CirculantFamily& fam);

/// xₖ(t) = a + b cos(t + 2(k−1)θ) with its reduced residual under M(B₀).
ReducedSolution family_member(double t, const CirculantFamily& fam);

/// dx/dt along the family.
Eigen::VectorXd family_tangent(double t, const CirculantFamily& fam);

/// max(|λ₀A₀ − 6a|, |λ₂A₁ − 6b|).
double cube_balance_residual(const CirculantFamily& fam);

/// max over the mode-4 cosine and sine vectors v of ‖M v‖ / ‖v‖.
double kernel_residual(const CirculantFamily& fam);

}  // namespace bubblefield::circulant
