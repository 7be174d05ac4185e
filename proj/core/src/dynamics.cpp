#include "bubblefield/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "bubblefield/error.hpp"

namespace bubblefield::dynamics {

PerturbationSchedule PerturbationSchedule::zero(int k) {
  PerturbationSchedule s;
  s.dir1_ = Eigen::VectorXd::Zero(k);
  s.dir2_ = Eigen::VectorXd::Zero(k);
  return s;
}

PerturbationSchedule PerturbationSchedule::make(ScheduleKind kind,
                                                double amplitude, double rate,
                                                Eigen::VectorXd dir1,
                                                Eigen::VectorXd dir2) {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    throw Error(ErrorKind::InvalidArgument, "schedule amplitude must be >= 0");
  }
  if (kind != ScheduleKind::Zero && (!(rate > 0.0) || !std::isfinite(rate))) {
    throw Error(ErrorKind::InvalidArgument,
                "schedule rate must be > 0 so that the forcing decays");
  }
  if (dir1.size() != dir2.size()) {
    throw Error(ErrorKind::InvalidArgument,
                "schedule directions must have equal length");
  }
  if (!dir1.allFinite() || !dir2.allFinite()) {
    throw Error(ErrorKind::InvalidArgument, "schedule directions must be finite");
  }
  PerturbationSchedule s;
  s.kind_ = kind;
  s.amplitude_ = kind == ScheduleKind::Zero ? 0.0 : amplitude;
  s.rate_ = rate;
  s.dir1_ = std::move(dir1);
  s.dir2_ = std::move(dir2);
  return s;
}

double PerturbationSchedule::envelope(double t) const {
  switch (kind_) {
    case ScheduleKind::Zero:
      return 0.0;
    case ScheduleKind::Exponential:
      return amplitude_ * std::exp(-rate_ * t);
    case ScheduleKind::Power:
      return amplitude_ * std::pow(1.0 + t, -rate_);
  }
  return 0.0;
}

void IntegratorOptions::validate() const {
  if (!(rtol > 0.0) || !(atol >= 0.0) || !(alpha_floor > 0.0) ||
      !(sample_dt > 0.0) || !(min_step > 0.0) || max_steps <= 0) {
    throw Error(ErrorKind::InvalidArgument, "invalid integrator options");
  }
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void check_state(const TrajectoryState& state, int k) {
  if (state.alpha.size() != k || state.beta.size() != k) {
    throw Error(ErrorKind::InvalidArgument,
                "state length does not match the interaction matrix");
  }
}

// Σ_{j≠k} m_jk αⱼ^{3/2}; diagonal of m is zero.
Eigen::VectorXd coupling(const Eigen::VectorXd& alpha, const InteractionMatrix& m) {
  const Eigen::VectorXd p = alpha.array() * alpha.array().sqrt();
  return m.matrix() * p;
}

// Right-hand side on the packed vector y = (α, β). Returns false when some
// αₖ ≤ 0 so that the step controller can reject the step.
bool packed_field(double t, const Eigen::VectorXd& y, const InteractionMatrix& m,
                  const PerturbationSchedule& schedule, Eigen::VectorXd& dy) {
  const int k = m.size();
  const auto alpha = y.head(k);
  const auto beta = y.tail(k);
  if ((alpha.array() <= 0.0).any() || !y.allFinite()) return false;
  const Eigen::VectorXd p = alpha.array() * alpha.array().sqrt();
  const Eigen::VectorXd sum = m.matrix() * p;
  dy.resize(2 * k);
  dy.head(k) = 2.0 * alpha - beta;
  dy.tail(k) = 3.0 * beta - (alpha.array().sqrt() * sum.array()).matrix();
  if (!schedule.autonomous()) {
    const double e = schedule.envelope(t);
    dy.head(k) += e * schedule.dir1();
    dy.tail(k) += e * schedule.dir2();
  }
  return dy.allFinite();
}

// Dormand–Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Continuous extension (Hairer–Wanner, order 4).
constexpr double d1 = -12715105075.0 / 11282082432,
                 d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072,
                 d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

struct DenseStep {
  double t0 = 0.0;
  double h = 0.0;
  Eigen::VectorXd r1, r2, r3, r4, r5;

  Eigen::VectorXd at(double t) const {
    const double s = (t - t0) / h;
    const double s1 = 1.0 - s;
    return r1 + s * (r2 + s1 * (r3 + s * (r4 + s1 * r5)));
  }
};

TrajectoryState unpack(double t, const Eigen::VectorXd& y, int k) {
  return {t, y.head(k), y.tail(k)};
}

}  // namespace

std::pair<Eigen::VectorXd, Eigen::VectorXd> vector_field(
    const TrajectoryState& state, const InteractionMatrix& m) {
  check_state(state, m.size());
  if ((state.alpha.array() <= 0.0).any()) {
    throw Error(ErrorKind::NegativeAlpha, "vector_field needs alpha > 0");
  }
  const Eigen::VectorXd sum = coupling(state.alpha, m);
  Eigen::VectorXd dalpha = 2.0 * state.alpha - state.beta;
  Eigen::VectorXd dbeta =
      3.0 * state.beta - (state.alpha.array().sqrt() * sum.array()).matrix();
  return {std::move(dalpha), std::move(dbeta)};
}

double lyapunov(const TrajectoryState& state, const InteractionMatrix& m) {
  check_state(state, m.size());
  if ((state.alpha.array() < 0.0).any()) {
    throw Error(ErrorKind::NegativeAlpha, "lyapunov needs alpha >= 0");
  }
  const Eigen::VectorXd drift = 2.0 * state.alpha - state.beta;
  const Eigen::VectorXd p = state.alpha.array() * state.alpha.array().sqrt();
  // Σ_{i<j} m_ij pᵢpⱼ = ½ pᵀ m p
  const double pair_sum = 0.5 * p.dot(m.matrix() * p);
  return 0.5 * drift.squaredNorm() + 3.0 * state.alpha.squaredNorm() -
         (2.0 / 3.0) * pair_sum;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> lyapunov_gradient(
    const TrajectoryState& state, const InteractionMatrix& m) {
  check_state(state, m.size());
  const Eigen::VectorXd drift = 2.0 * state.alpha - state.beta;
  const Eigen::VectorXd sum = coupling(state.alpha, m);
  Eigen::VectorXd d_alpha = 2.0 * drift + 6.0 * state.alpha -
                            (state.alpha.array().sqrt() * sum.array()).matrix();
  Eigen::VectorXd d_beta = -drift;
  return {std::move(d_alpha), std::move(d_beta)};
}

double lyapunov_rate(const TrajectoryState& state) {
  return 5.0 * (2.0 * state.alpha - state.beta).squaredNorm();
}

double distance_to_set(const TrajectoryState& state,
                       std::span<const EquilibriumPoint> equilibria) {
  if (equilibria.empty()) {
    throw Error(ErrorKind::EmptySet, "equilibrium list is empty");
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& eq : equilibria) {
    if (eq.a.size() != state.alpha.size()) {
      throw Error(ErrorKind::InvalidArgument,
                  "equilibrium length does not match the state");
    }
    const double d = std::max((state.alpha - eq.a).cwiseAbs().maxCoeff(),
                              (state.beta - eq.c).cwiseAbs().maxCoeff());
    best = std::min(best, d);
  }
  return best;
}

Trajectory integrate(const TrajectoryState& initial, const InteractionMatrix& m,
                     const PerturbationSchedule& schedule, double t_end,
                     const IntegratorOptions& options,
                     std::span<const EquilibriumPoint> equilibria) {
  options.validate();
  const int k = m.size();
  check_state(initial, k);
  if ((initial.alpha.array() <= 0.0).any()) {
    throw Error(ErrorKind::NegativeAlpha, "initial alpha must be positive");
  }
  if (!(t_end > initial.t)) {
    throw Error(ErrorKind::InvalidArgument, "t_end must exceed the initial time");
  }
  if (!schedule.autonomous() && schedule.dir1().size() != k) {
    throw Error(ErrorKind::InvalidArgument,
                "schedule directions do not match K");
  }

  Trajectory traj;
  auto record = [&](const TrajectoryState& s) {
    traj.lyapunov.push_back(lyapunov(s, m));
    traj.lyapunov_rate.push_back(lyapunov_rate(s));
    traj.dist_to_eq.push_back(equilibria.empty()
                                  ? std::numeric_limits<double>::quiet_NaN()
                                  : distance_to_set(s, equilibria));
    traj.samples.push_back(s);
  };

  const double t0 = initial.t;
  const double span = t_end - t0;
  const long n_grid = static_cast<long>(std::floor(span / options.sample_dt * (1.0 + 1e-12)));
  auto grid_time = [&](long i) { return t0 + static_cast<double>(i) * options.sample_dt; };
  long next_sample = 1;

  Eigen::VectorXd y(2 * k);
  y << initial.alpha, initial.beta;
  record(initial);

  Eigen::VectorXd k1(2 * k), k2(2 * k), k3(2 * k), k4(2 * k), k5(2 * k),
      k6(2 * k), k7(2 * k), ytmp(2 * k), ynew(2 * k), err(2 * k);
  double t = t0;
  if (!packed_field(t, y, m, schedule, k1)) {
    throw Error(ErrorKind::NegativeAlpha, "vector field undefined at the initial state");
  }

  double h = options.initial_step;
  if (h <= 0.0) {
    const Eigen::ArrayXd scale = options.atol + options.rtol * y.array().abs();
    const double d0 = std::sqrt((y.array() / scale).square().mean());
    const double d1n = std::sqrt((k1.array() / scale).square().mean());
    h = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
    h = std::min(h, options.sample_dt);
  }

  constexpr double safety = 0.9, beta_pi = 0.04, expo = 0.2 - 0.75 * beta_pi;
  constexpr double fac_min = 0.2, fac_max = 10.0;
  double err_old = 1e-4;
  bool last_rejected = false;

  const double exit_floor = options.alpha_floor;
  for (long step = 0; t < t_end; ++step) {
    if (step >= options.max_steps) {
      throw IntegrationError(ErrorKind::StepUnderflow, t,
                             "step budget exhausted at t=" + fmt(t));
    }
    if (h < options.min_step || t + h == t) {
      throw IntegrationError(ErrorKind::StepUnderflow, t,
                             "adaptive step fell below " +
                                 fmt(options.min_step) +
                                 " at t=" + fmt(t));
    }
    const bool final_step = t + h >= t_end;
    if (final_step) h = t_end - t;

    bool ok = true;
    ytmp = y + h * a21 * k1;
    ok = ok && packed_field(t + c2 * h, ytmp, m, schedule, k2);
    if (ok) {
      ytmp = y + h * (a31 * k1 + a32 * k2);
      ok = packed_field(t + c3 * h, ytmp, m, schedule, k3);
    }
    if (ok) {
      ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
      ok = packed_field(t + c4 * h, ytmp, m, schedule, k4);
    }
    if (ok) {
      ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      ok = packed_field(t + c5 * h, ytmp, m, schedule, k5);
    }
    if (ok) {
      ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      ok = packed_field(t + h, ytmp, m, schedule, k6);
    }
    if (ok) {
      ynew = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
      ok = packed_field(t + h, ynew, m, schedule, k7);
    }

    double err_norm = std::numeric_limits<double>::infinity();
    if (ok) {
      err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      const Eigen::ArrayXd scale =
          options.atol + options.rtol * y.array().abs().max(ynew.array().abs());
      err_norm = std::sqrt((err.array() / scale).square().mean());
      if (!std::isfinite(err_norm)) err_norm = std::numeric_limits<double>::infinity();
    }

    if (err_norm > 1.0) {
      ++traj.rejected_steps;
      const double shrink =
          std::isfinite(err_norm)
              ? std::min(1.0 / fac_min, std::pow(err_norm, expo) / safety)
              : 1.0 / fac_min;
      h /= shrink;
      last_rejected = true;
      continue;
    }

    ++traj.accepted_steps;
    DenseStep dense;
    dense.t0 = t;
    dense.h = h;
    dense.r1 = y;
    dense.r2 = ynew - y;
    dense.r3 = h * k1 - dense.r2;
    dense.r4 = dense.r2 - h * k7 - dense.r3;
    dense.r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);

    const double t_new = final_step ? t_end : t + h;

    // Regime exit: locate the first crossing of alpha_floor on the dense output.
    if (ynew.head(k).minCoeff() < exit_floor) {
      double lo = t, hi = t_new;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (dense.at(mid).head(k).minCoeff() < exit_floor) hi = mid; else lo = mid;
      }
      throw IntegrationError(ErrorKind::AlphaCollapse, hi,
                             "alpha fell below alpha_floor at t=" + fmt(hi));
    }

    while (next_sample <= n_grid && grid_time(next_sample) <= t_new) {
      const double ts = grid_time(next_sample);
      if (t_end - ts > 1e-12 * std::max(1.0, std::abs(t_end))) {
        record(unpack(ts, dense.at(ts), k));
      }
      ++next_sample;
    }

    const double fac11 = std::pow(err_norm, expo);
    double fac = fac11 / std::pow(err_old, beta_pi);
    fac = std::max(1.0 / fac_max, std::min(1.0 / fac_min, fac / safety));
    double h_next = h / fac;
    if (last_rejected) h_next = std::min(h_next, h);
    err_old = std::max(err_norm, 1e-4);
    last_rejected = false;

    t = t_new;
    y = ynew;
    k1 = k7;
    if (!final_step) h = h_next;
  }
  record(unpack(t_end, y, k));
  return traj;
}

OmegaReport omega_limit_estimate(const Trajectory& traj, double window) {
  if (traj.samples.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "trajectory has fewer than 2 samples");
  }
  const double t_first = traj.samples.front().t;
  const double t_last = traj.samples.back().t;
  if (!(window > 0.0) || window >= t_last - t_first) {
    throw Error(ErrorKind::WindowTooLarge,
                "window must be positive and shorter than the trajectory span");
  }
  const int k = static_cast<int>(traj.samples.front().alpha.size());
  OmegaReport report;
  report.t_from = t_last - window;
  report.lower = Eigen::VectorXd::Constant(2 * k, std::numeric_limits<double>::infinity());
  report.upper = -report.lower;
  for (const auto& s : traj.samples) {
    if (s.t < report.t_from) continue;
    Eigen::VectorXd v(2 * k);
    v << s.alpha, s.beta;
    report.lower = report.lower.cwiseMin(v);
    report.upper = report.upper.cwiseMax(v);
    ++report.samples;
  }
  report.diameter = (report.upper - report.lower).maxCoeff();
  report.final_dist_to_eq = traj.dist_to_eq.back();
  return report;
}

std::vector<PhysicalSample> to_physical(const Trajectory& traj) {
  std::vector<PhysicalSample> out;
  out.reserve(traj.samples.size());
  for (const auto& st : traj.samples) {
    const double s = std::exp(st.t);
    out.push_back({s, st.alpha / (s * s), st.beta / (s * s * s)});
  }
  return out;
}

TrajectoryState from_physical(const PhysicalSample& sample) {
  const double s = sample.s;
  return {std::log(s), sample.lambda * (s * s), sample.b * (s * s * s)};
}

double max_dissipation_defect(const Trajectory& traj) {
  double worst = 0.0;
  const auto& ts = traj.samples;
  for (std::size_t i = 1; i + 1 < ts.size(); ++i) {
    const double left = ts[i].t - ts[i - 1].t;
    const double right = ts[i + 1].t - ts[i].t;
    if (std::abs(left - right) > 1e-9 * std::max(left, right)) continue;
    const double slope =
        (traj.lyapunov[i + 1] - traj.lyapunov[i - 1]) / (ts[i + 1].t - ts[i - 1].t);
    worst = std::max(worst, std::abs(slope - traj.lyapunov_rate[i]));
  }
  return worst;
}

}  // namespace bubblefield::dynamics
