#include "bubblefield/groundstate.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "bubblefield/config.hpp"
#include "bubblefield/error.hpp"

namespace bubblefield::groundstate {
namespace {

double integrand_w73(double r) {
  const double q = 1.0 + r * r / 15.0;
  return r * r * r * r * std::pow(q, -3.5);
}

double integrand_lw_sq(double r) {
  const double lw = lambda_w(r);
  return r * r * r * r * lw * lw;
}

template <typename F>
double composite(F&& f, double a, double b, int n_panels, QuadratureRule rule) {
  const double h = (b - a) / n_panels;
  double sum = 0.0;
  if (rule == QuadratureRule::GaussLegendre) {
    using Gauss = boost::math::quadrature::gauss<double, 8>;
    for (int p = 0; p < n_panels; ++p) {
      const double lo = a + p * h;
      sum += Gauss::integrate(f, lo, lo + h);
    }
    return sum;
  }
  // composite Simpson, one parabola per panel
  for (int p = 0; p < n_panels; ++p) {
    const double lo = a + p * h;
    sum += f(lo) + 4.0 * f(lo + 0.5 * h) + f(lo + h);
  }
  return sum * h / 6.0;
}

// Coefficients of (1 + u)^e as a power series in u.
double binomial_coefficient(double e, int n) {
  double c = 1.0;
  for (int i = 0; i < n; ++i) c *= (e - i) / (i + 1);
  return c;
}

}  // namespace

double ground_state(double r) {
  return std::pow(1.0 + r * r / 15.0, -1.5);
}

double ground_state_d1(double r) {
  // d/dr (1 + r²/15)^{-3/2} = -(r/5)(1 + r²/15)^{-5/2}
  return -(r / 5.0) * std::pow(1.0 + r * r / 15.0, -2.5);
}

double ground_state_d2(double r) {
  const double q = 1.0 + r * r / 15.0;
  return -0.2 * std::pow(q, -2.5) + (r * r / 15.0) * std::pow(q, -3.5);
}

double lambda_w(double r) {
  return 1.5 * ground_state(r) + r * ground_state_d1(r);
}

double unit_sphere_area() {
  return 8.0 * std::numbers::pi * std::numbers::pi / 3.0;
}

void QuadratureSpec::validate() const {
  if (!(r_max >= 10.0) || !std::isfinite(r_max)) {
    throw Error(ErrorKind::InvalidArgument, "quadrature r_max must be >= 10");
  }
  if (n_panels < 16) {
    throw Error(ErrorKind::InvalidArgument, "quadrature n_panels must be >= 16");
  }
  if (tail_order < 1) {
    throw Error(ErrorKind::InvalidArgument, "quadrature tail_order must be >= 1");
  }
}

double radial_integral_w73(double r_max, int n_panels, QuadratureRule rule) {
  return composite(integrand_w73, 0.0, r_max, n_panels, rule);
}

double radial_integral_lw_sq(double r_max, int n_panels, QuadratureRule rule) {
  return composite(integrand_lw_sq, 0.0, r_max, n_panels, rule);
}

// r⁴W^{7/3} = 15^{7/2} r^{-3} (1 + u)^{-7/2},  u = 15/r².
double tail_w73(double r_max, int terms) {
  const double lead = std::pow(15.0, 3.5);
  double sum = 0.0;
  for (int n = 0; n < terms; ++n) {
    const double c = binomial_coefficient(-3.5, n) * std::pow(15.0, n);
    sum += c * std::pow(r_max, -2.0 - 2.0 * n) / (2.0 + 2.0 * n);
  }
  return lead * sum;
}

// r⁴(ΛW)² = (15⁵/100) r^{-2} (1 − u)² (1 + u)^{-5},  u = 15/r².
double tail_lw_sq(double r_max, int terms) {
  const double lead = std::pow(15.0, 5) / 100.0;
  double sum = 0.0;
  for (int n = 0; n < terms; ++n) {
    // coefficient of uⁿ in (1 − 2u + u²)(1 + u)^{-5}
    double c = binomial_coefficient(-5.0, n);
    if (n >= 1) c -= 2.0 * binomial_coefficient(-5.0, n - 1);
    if (n >= 2) c += binomial_coefficient(-5.0, n - 2);
    sum += c * std::pow(15.0, n) * std::pow(r_max, -1.0 - 2.0 * n) /
           (1.0 + 2.0 * n);
  }
  return lead * sum;
}

namespace {

struct KappaEstimate {
  double w73;
  double lw_sq;
  double kappa;
};

KappaEstimate estimate(const QuadratureSpec& spec, int n_panels) {
  const double omega = unit_sphere_area();
  const double w73 =
      omega * (radial_integral_w73(spec.r_max, n_panels, spec.rule) +
               tail_w73(spec.r_max, spec.tail_order));
  const double lw_sq =
      omega * (radial_integral_lw_sq(spec.r_max, n_panels, spec.rule) +
               tail_lw_sq(spec.r_max, spec.tail_order));
  return {w73, lw_sq, 1.5 * std::pow(15.0, 1.5) * w73 / lw_sq};
}

}  // namespace

KappaReport verify_kappa(const QuadratureSpec& spec) {
  spec.validate();
  const KappaEstimate fine = estimate(spec, spec.n_panels);
  const KappaEstimate mid = estimate(spec, spec.n_panels / 2);
  const KappaEstimate coarse = estimate(spec, spec.n_panels / 4);

  const double err_fine = std::abs(fine.kappa - mid.kappa);
  const double err_coarse = std::abs(mid.kappa - coarse.kappa);
  // below ~1e-13 relative the differences are round-off noise
  const double floor = 1e-13 * std::abs(fine.kappa);
  if (!std::isfinite(fine.kappa) || (err_fine > floor && err_fine > err_coarse)) {
    throw Error(ErrorKind::QuadratureDiverged,
                "panel refinement did not reduce the error estimate (" +
                    std::to_string(err_coarse) + " -> " +
                    std::to_string(err_fine) + ")");
  }

  KappaReport report;
  report.integral_w73 = fine.w73;
  report.norm_lw_sq = fine.lw_sq;
  report.tail_w73 = tail_w73(spec.r_max, spec.tail_order);
  report.tail_lw_sq = tail_lw_sq(spec.r_max, spec.tail_order);
  report.kappa_quadrature = fine.kappa;
  report.kappa_closed = kappa_closed_form();
  report.rel_error =
      std::abs(report.kappa_quadrature - report.kappa_closed) / report.kappa_closed;
  report.refinement_error = err_fine / std::abs(fine.kappa);
  return report;
}

}  // namespace bubblefield::groundstate
