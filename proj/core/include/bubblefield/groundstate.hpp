#pragma once

namespace bubblefield::groundstate {

/// W(r) = (1 + r²/15)^{-3/2}, the radial ground state on ℝ⁵.
double ground_state(double r);
/// W'(r), closed form.
double ground_state_d1(double r);
/// W''(r), closed form.
double ground_state_d2(double r);
/// ΛW = (3/2)W + rW'.
double lambda_w(double r);

/// Area of the unit 4-sphere, 8π²/3.
double unit_sphere_area();

enum class QuadratureRule { GaussLegendre, Simpson };

struct QuadratureSpec {
  double r_max = 200.0;
  int n_panels = 2048;
  QuadratureRule rule = QuadratureRule::GaussLegendre;
  // number of terms of the large-r series used for the analytic tail
  int tail_order = 4;

  void validate() const;
};

struct KappaReport {
  double integral_w73 = 0.0;   // ∫_{ℝ⁵} W^{7/3} dx
  double norm_lw_sq = 0.0;     // ‖ΛW‖²_{L²(ℝ⁵)}
  double tail_w73 = 0.0;       // analytic tail of ∫ r⁴W^{7/3} dr beyond r_max
  double tail_lw_sq = 0.0;     // analytic tail of ∫ r⁴(ΛW)² dr beyond r_max
  double kappa_quadrature = 0.0;
  double kappa_closed = 0.0;
  double rel_error = 0.0;
  double refinement_error = 0.0;  // |κ(n) − κ(n/2)| / κ(n)
};

/// Radial quadrature of both integrals, analytic tails, and comparison with
/// the closed-form κ. Throws QuadratureDiverged when halving the panel count
/// does not show a shrinking difference above the round-off floor.
KappaReport verify_kappa(const QuadratureSpec& spec = {});

/// ∫_0^{r_max} r⁴ W^{7/3} dr and ∫_0^{r_max} r⁴ (ΛW)² dr with the given rule.
double radial_integral_w73(double r_max, int n_panels, QuadratureRule rule);
double radial_integral_lw_sq(double r_max, int n_panels, QuadratureRule rule);

/// ∫_{r_max}^∞ of the same integrands from their large-r series.
double tail_w73(double r_max, int terms);
double tail_lw_sq(double r_max, int terms);

}  // namespace bubblefield::groundstate
