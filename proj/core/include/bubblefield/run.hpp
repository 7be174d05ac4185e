#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "bubblefield/dynamics.hpp"
#include "bubblefield/equilibrium.hpp"
#include "bubblefield/groundstate.hpp"

namespace bubblefield {

enum class Command { Equilibria, Simulate, K10, K3Check, KappaCheck };
enum class OutputFormat { Json, Csv };

std::string_view command_name(Command c);

struct ScheduleSpec {
  dynamics::ScheduleKind kind = dynamics::ScheduleKind::Zero;
  double amplitude = 0.0;
  double rate = 1.0;
  std::optional<Eigen::VectorXd> dir1;  // default: all ones
  std::optional<Eigen::VectorXd> dir2;
};

/// Either an explicit state or "start-at-equilibrium:index,offset", which
/// means α = (1 + offset)·a of the index-th solved equilibrium and β = 2α.
struct InitialSpec {
  std::optional<Eigen::VectorXd> alpha;
  std::optional<Eigen::VectorXd> beta;
  int equilibrium_index = -1;
  double offset = 0.0;
};

struct K10Spec {
  double bracket_lo = 4.70;
  double bracket_hi = 4.71;
  double tol = 1e-12;
  int samples = 100;
};

struct RunConfig {
  Command command = Command::Equilibria;
  std::vector<std::vector<double>> points;
  double kappa = 0.0;
  std::string kappa_source = "closed-form";
  std::uint64_t seed = 0;
  SolverOptions solver;
  dynamics::IntegratorOptions integrator;
  std::optional<ScheduleSpec> schedule;
  std::optional<InitialSpec> initial;
  double t_end = 40.0;
  std::optional<double> omega_window;  // default: last 25% of the run
  groundstate::QuadratureSpec quadrature;
  int k3_triangles = 50;
  K10Spec k10;
  std::string output;  // empty: standard output
  OutputFormat format = OutputFormat::Json;
};

/// Parses and validates a run-config JSON document, filling defaults.
/// Throws ParseError (with line/column), ValidationError naming the field,
/// or UnknownKey.
RunConfig parse_run_config(std::string_view document);

/// Reads a points document {"points": [...], "kappa": optional}.
struct PointsDocument {
  std::vector<std::vector<double>> points;
  std::optional<double> kappa;
};
PointsDocument parse_points_document(std::string_view document);

struct RunOutput {
  std::string report;              // JSON report (summary for simulate)
  std::optional<std::string> csv;  // simulate trajectory
};

/// Executes the command. Deterministic for a fixed config and seed.
/// Throws bubblefield::Error on failure.
RunOutput run(const RunConfig& config);

/// Writes the outputs to config.output (or `out`) and returns the exit code:
/// 0 success, 1 validation, 2 numerical failure. Errors go to `err` as JSON.
int run_and_write(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Machine-readable error document for `e`.
std::string error_json(const std::exception& e);
int exit_code_for(const std::exception& e);

}  // namespace bubblefield
