#pragma once

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bubblefield/config.hpp"
#include "bubblefield/equilibrium.hpp"

namespace bubblefield::dynamics {

/// Rescaled modulation state: t = log s, αₖ = s²λₖ(s), βₖ = s³bₖ(s).
struct TrajectoryState {
  double t = 0.0;
  Eigen::VectorXd alpha;
  Eigen::VectorXd beta;
};

enum class ScheduleKind { Zero, Exponential, Power };

/// Decaying forcing ε¹(t) = ε(t)·dir1, ε²(t) = ε(t)·dir2 with
/// ε(t) = c₀e^{−γt} or c₀(1+t)^{−γ}. Non-decaying schedules cannot be built.
class PerturbationSchedule {
 public:
  /// The autonomous case.
  static PerturbationSchedule zero(int k);
  /// Throws InvalidArgument for amplitude < 0, rate ≤ 0 (non-zero kinds)
  /// or direction vectors of mismatched length.
  static PerturbationSchedule make(ScheduleKind kind, double amplitude,
                                   double rate, Eigen::VectorXd dir1,
                                   Eigen::VectorXd dir2);

  ScheduleKind kind() const { return kind_; }
  double amplitude() const { return amplitude_; }
  double rate() const { return rate_; }
  const Eigen::VectorXd& dir1() const { return dir1_; }
  const Eigen::VectorXd& dir2() const { return dir2_; }
  bool autonomous() const { return kind_ == ScheduleKind::Zero || amplitude_ == 0.0; }

  /// Scalar envelope ε(t).
  double envelope(double t) const;

 private:
  PerturbationSchedule() = default;

  ScheduleKind kind_ = ScheduleKind::Zero;
  double amplitude_ = 0.0;
  double rate_ = 1.0;
  Eigen::VectorXd dir1_;
  Eigen::VectorXd dir2_;
};

struct Trajectory {
  std::vector<TrajectoryState> samples;
  std::vector<double> lyapunov;
  std::vector<double> lyapunov_rate;
  std::vector<double> dist_to_eq;  // NaN when no equilibria were supplied
  int accepted_steps = 0;
  int rejected_steps = 0;
};

struct IntegratorOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  double alpha_floor = 1e-8;
  double sample_dt = 0.1;
  double initial_step = 0.0;  // 0: automatic
  double min_step = 1e-14;
  long max_steps = 10'000'000;

  void validate() const;
};

struct OmegaReport {
  double t_from = 0.0;
  Eigen::VectorXd lower;  // bounding box over (α, β), length 2K
  Eigen::VectorXd upper;
  double diameter = 0.0;  // largest box side (max-norm)
  double final_dist_to_eq = 0.0;
  int samples = 0;
};

struct PhysicalSample {
  double s = 1.0;
  Eigen::VectorXd lambda;
  Eigen::VectorXd b;
};

/// Autonomous part of the rescaled system:
///   α'ₖ = 2αₖ − βₖ,  β'ₖ = 3βₖ − Σ_{j≠k} m_jk αₖ^{1/2} αⱼ^{3/2}.
/// Throws NegativeAlpha when some αₖ ≤ 0.
std::pair<Eigen::VectorXd, Eigen::VectorXd> vector_field(
    const TrajectoryState& state, const InteractionMatrix& m);

/// L = ½Σ(2αₖ−βₖ)² + 3Σαₖ² − (2/3)Σ_{i<j} m_ij αᵢ^{3/2}αⱼ^{3/2}.
double lyapunov(const TrajectoryState& state, const InteractionMatrix& m);

/// (∂L/∂α, ∂L/∂β), closed form.
std::pair<Eigen::VectorXd, Eigen::VectorXd> lyapunov_gradient(
    const TrajectoryState& state, const InteractionMatrix& m);

/// dL/dt along the autonomous flow: 5Σ(2αₖ−βₖ)².
double lyapunov_rate(const TrajectoryState& state);

/// Dormand–Prince 5(4) with PI step control and dense output at
/// options.sample_dt (plus the endpoint). Throws AlphaCollapse or
/// StepUnderflow as IntegrationError carrying the exit time.
Trajectory integrate(const TrajectoryState& initial, const InteractionMatrix& m,
                     const PerturbationSchedule& schedule, double t_end,
                     const IntegratorOptions& options = {},
                     std::span<const EquilibriumPoint> equilibria = {});

/// min over the set of max(‖α − a‖∞, ‖β − c‖∞). Throws EmptySet.
double distance_to_set(const TrajectoryState& state,
                       std::span<const EquilibriumPoint> equilibria);

/// Bounding box of the samples with t ≥ t_end − window. Throws WindowTooLarge.
OmegaReport omega_limit_estimate(const Trajectory& traj, double window);

/// s = eᵗ, λ = α/s², b = β/s³ per sample.
std::vector<PhysicalSample> to_physical(const Trajectory& traj);

/// Inverse of to_physical for a single sample.
TrajectoryState from_physical(const PhysicalSample& sample);

/// max over interior samples of |(L_{i+1} − L_{i−1})/(t_{i+1} − t_{i−1}) − rate_i|
/// for an autonomous trajectory; second order in the sample spacing.
double max_dissipation_defect(const Trajectory& traj);

}  // namespace bubblefield::dynamics
