#include "bubblefield/run.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <fstream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "bubblefield/circulant.hpp"
#include "bubblefield/error.hpp"
#include "json_io.hpp"

namespace bubblefield {

using nlohmann::json;
using detail::dump_json;
using detail::to_json;

std::string_view command_name(Command c) {
  switch (c) {
    case Command::Equilibria: return "equilibria";
    case Command::Simulate: return "simulate";
    case Command::K10: return "k10";
    case Command::K3Check: return "k3-check";
    case Command::KappaCheck: return "kappa-check";
  }
  return "unknown";
}

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& why) {
  throw Error(ErrorKind::ValidationError, field + ": " + why);
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.contains(it.key())) {
      throw Error(ErrorKind::UnknownKey,
                  "unknown key '" + it.key() + "'" + (where.empty() ? "" : " in " + where));
    }
  }
}

double get_number(const json& obj, const char* key, const std::string& field) {
  const auto& v = obj.at(key);
  if (!v.is_number()) invalid(field, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) invalid(field, "expected a finite number");
  return d;
}

int get_int(const json& obj, const char* key, const std::string& field) {
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) invalid(field, "expected an integer");
  return v.get<int>();
}

Eigen::VectorXd get_vector(const json& v, const std::string& field) {
  if (!v.is_array()) invalid(field, "expected an array of numbers");
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) invalid(field, "expected an array of numbers");
    out(static_cast<Eigen::Index>(i)) = v[i].get<double>();
  }
  return out;
}

std::vector<std::vector<double>> get_points(const json& v, const std::string& field) {
  if (!v.is_array()) invalid(field, "expected an array of points");
  std::vector<std::vector<double>> pts;
  for (const auto& p : v) {
    if (!p.is_array()) invalid(field, "each point must be an array of numbers");
    if (p.size() != 5) invalid(field, "each point must have 5 coordinates");
    std::vector<double> coords;
    for (const auto& c : p) {
      if (!c.is_number()) invalid(field, "coordinates must be numbers");
      coords.push_back(c.get<double>());
    }
    pts.push_back(std::move(coords));
  }
  return pts;
}

json parse_json(std::string_view document) {
  try {
    return json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    // locate line/column of the byte offset
    std::size_t line = 1, column = 1;
    const std::size_t limit = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, document.size());
    for (std::size_t i = 0; i < limit; ++i) {
      if (document[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ", column " +
                                           std::to_string(column) + ": " + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void parse_kappa(const json& v, RunConfig& cfg) {
  if (v.is_number()) {
    cfg.kappa = v.get<double>();
    cfg.kappa_source = "explicit";
    if (!(cfg.kappa > 0.0) || !std::isfinite(cfg.kappa)) invalid("kappa", "must be positive");
  } else if (v.is_string() && (v == "closed-form" || v == "quadrature")) {
    cfg.kappa_source = v.get<std::string>();
  } else {
    invalid("kappa", "expected a positive number, \"closed-form\" or \"quadrature\"");
  }
}

}  // namespace

PointsDocument parse_points_document(std::string_view document) {
  const json doc = parse_json(document);
  if (!doc.is_object()) invalid("document", "expected a JSON object");
  reject_unknown(doc, {"points", "kappa"}, "points document");
  if (!doc.contains("points")) invalid("points", "missing");
  PointsDocument out;
  out.points = get_points(doc["points"], "points");
  if (doc.contains("kappa")) {
    out.kappa = get_number(doc, "kappa", "kappa");
    if (!(*out.kappa > 0.0)) invalid("kappa", "must be positive");
  }
  return out;
}

RunConfig parse_run_config(std::string_view document) {
  const json doc = parse_json(document);
  if (!doc.is_object()) invalid("document", "expected a JSON object");
  reject_unknown(doc,
                 {"command", "points", "points_file", "kappa", "seed", "solver",
                  "integrator", "schedule", "initial", "t_end", "omega_window",
                  "quadrature", "k3", "k10", "output", "format"},
                 "");

  RunConfig cfg;
  if (!doc.contains("command") || !doc["command"].is_string()) {
    invalid("command", "missing or not a string");
  }
  const std::string command = doc["command"];
  if (command == "equilibria") cfg.command = Command::Equilibria;
  else if (command == "simulate") cfg.command = Command::Simulate;
  else if (command == "k10") cfg.command = Command::K10;
  else if (command == "k3-check") cfg.command = Command::K3Check;
  else if (command == "kappa-check") cfg.command = Command::KappaCheck;
  else invalid("command", "unknown command '" + command + "'");

  if (cfg.command == Command::Simulate) cfg.format = OutputFormat::Csv;

  if (doc.contains("points") && doc.contains("points_file")) {
    invalid("points", "give either points or points_file, not both");
  }
  if (doc.contains("points")) {
    cfg.points = get_points(doc["points"], "points");
  } else if (doc.contains("points_file")) {
    if (!doc["points_file"].is_string()) invalid("points_file", "expected a path");
    const auto pd = parse_points_document(read_file(doc["points_file"].get<std::string>()));
    cfg.points = pd.points;
    if (pd.kappa) {
      cfg.kappa = *pd.kappa;
      cfg.kappa_source = "explicit";
    }
  }
  if (doc.contains("kappa")) parse_kappa(doc["kappa"], cfg);

  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned() && !(doc["seed"].is_number_integer() && doc["seed"].get<long long>() >= 0)) {
      invalid("seed", "expected a non-negative integer");
    }
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  cfg.solver.seed = cfg.seed;

  if (doc.contains("solver")) {
    const auto& s = doc["solver"];
    if (!s.is_object()) invalid("solver", "expected an object");
    reject_unknown(s, {"tol", "dedup_radius", "random_starts", "max_iterations", "seeds"}, "solver");
    if (s.contains("tol")) cfg.solver.tol = get_number(s, "tol", "solver.tol");
    if (s.contains("dedup_radius")) cfg.solver.dedup_radius = get_number(s, "dedup_radius", "solver.dedup_radius");
    if (s.contains("random_starts")) cfg.solver.random_starts = get_int(s, "random_starts", "solver.random_starts");
    if (s.contains("max_iterations")) cfg.solver.max_iterations = get_int(s, "max_iterations", "solver.max_iterations");
    if (s.contains("seeds")) {
      if (!s["seeds"].is_array()) invalid("solver.seeds", "expected an array of vectors");
      for (const auto& v : s["seeds"]) cfg.solver.seeds.push_back(get_vector(v, "solver.seeds"));
    }
    if (!(cfg.solver.tol > 0.0)) invalid("solver.tol", "must be positive");
    if (!(cfg.solver.dedup_radius >= 0.0)) invalid("solver.dedup_radius", "must be >= 0");
    if (cfg.solver.random_starts < 0) invalid("solver.random_starts", "must be >= 0");
    if (cfg.solver.max_iterations < 1) invalid("solver.max_iterations", "must be >= 1");
  }

  if (doc.contains("integrator")) {
    const auto& s = doc["integrator"];
    if (!s.is_object()) invalid("integrator", "expected an object");
    reject_unknown(s, {"rtol", "atol", "alpha_floor", "sample_dt", "initial_step"}, "integrator");
    auto& o = cfg.integrator;
    if (s.contains("rtol")) o.rtol = get_number(s, "rtol", "integrator.rtol");
    if (s.contains("atol")) o.atol = get_number(s, "atol", "integrator.atol");
    if (s.contains("alpha_floor")) o.alpha_floor = get_number(s, "alpha_floor", "integrator.alpha_floor");
    if (s.contains("sample_dt")) o.sample_dt = get_number(s, "sample_dt", "integrator.sample_dt");
    if (s.contains("initial_step")) o.initial_step = get_number(s, "initial_step", "integrator.initial_step");
    try {
      o.validate();
    } catch (const Error& e) {
      invalid("integrator", e.what());
    }
  }

  if (doc.contains("schedule")) {
    const auto& s = doc["schedule"];
    if (!s.is_object()) invalid("schedule", "expected an object");
    reject_unknown(s, {"kind", "amplitude", "rate", "dir1", "dir2"}, "schedule");
    ScheduleSpec spec;
    if (!s.contains("kind") || !s["kind"].is_string()) invalid("schedule.kind", "missing");
    const std::string kind = s["kind"];
    if (kind == "zero") spec.kind = dynamics::ScheduleKind::Zero;
    else if (kind == "exponential") spec.kind = dynamics::ScheduleKind::Exponential;
    else if (kind == "power") spec.kind = dynamics::ScheduleKind::Power;
    else invalid("schedule.kind", "expected zero, exponential or power");
    if (s.contains("amplitude")) spec.amplitude = get_number(s, "amplitude", "schedule.amplitude");
    if (s.contains("rate")) spec.rate = get_number(s, "rate", "schedule.rate");
    if (s.contains("dir1")) spec.dir1 = get_vector(s["dir1"], "schedule.dir1");
    if (s.contains("dir2")) spec.dir2 = get_vector(s["dir2"], "schedule.dir2");
    if (!(spec.amplitude >= 0.0)) invalid("schedule.amplitude", "must be >= 0");
    if (spec.kind != dynamics::ScheduleKind::Zero && !(spec.rate > 0.0)) {
      invalid("schedule.rate", "must be > 0 so that the forcing decays");
    }
    cfg.schedule = spec;
  }

  if (doc.contains("initial")) {
    const auto& s = doc["initial"];
    InitialSpec init;
    if (s.is_string()) {
      const std::string text = s;
      const std::string prefix = "start-at-equilibrium:";
      if (text.rfind(prefix, 0) != 0) invalid("initial", "expected start-at-equilibrium:index,offset");
      const std::string rest = text.substr(prefix.size());
      const auto comma = rest.find(',');
      try {
        std::size_t used = 0;
        init.equilibrium_index = std::stoi(rest.substr(0, comma), &used);
        init.offset = comma == std::string::npos ? 0.0 : std::stod(rest.substr(comma + 1));
      } catch (const std::exception&) {
        invalid("initial", "malformed start-at-equilibrium directive");
      }
      if (init.equilibrium_index < 0) invalid("initial", "equilibrium index must be >= 0");
    } else if (s.is_object()) {
      reject_unknown(s, {"alpha", "beta"}, "initial");
      if (!s.contains("alpha") || !s.contains("beta")) invalid("initial", "needs alpha and beta");
      init.alpha = get_vector(s["alpha"], "initial.alpha");
      init.beta = get_vector(s["beta"], "initial.beta");
      if (init.alpha->size() != init.beta->size()) invalid("initial", "alpha and beta lengths differ");
    } else {
      invalid("initial", "expected an object or a start-at-equilibrium directive");
    }
    cfg.initial = init;
  }

  if (doc.contains("t_end")) cfg.t_end = get_number(doc, "t_end", "t_end");
  if (doc.contains("omega_window")) cfg.omega_window = get_number(doc, "omega_window", "omega_window");

  if (doc.contains("quadrature")) {
    const auto& s = doc["quadrature"];
    if (!s.is_object()) invalid("quadrature", "expected an object");
    reject_unknown(s, {"r_max", "n_panels", "rule", "tail_order"}, "quadrature");
    auto& q = cfg.quadrature;
    if (s.contains("r_max")) q.r_max = get_number(s, "r_max", "quadrature.r_max");
    if (s.contains("n_panels")) q.n_panels = get_int(s, "n_panels", "quadrature.n_panels");
    if (s.contains("tail_order")) q.tail_order = get_int(s, "tail_order", "quadrature.tail_order");
    if (s.contains("rule")) {
      if (s["rule"] == "gauss-legendre") q.rule = groundstate::QuadratureRule::GaussLegendre;
      else if (s["rule"] == "simpson") q.rule = groundstate::QuadratureRule::Simpson;
      else invalid("quadrature.rule", "expected gauss-legendre or simpson");
    }
    try {
      q.validate();
    } catch (const Error& e) {
      invalid("quadrature", e.what());
    }
  }

  if (doc.contains("k3")) {
    const auto& s = doc["k3"];
    if (!s.is_object()) invalid("k3", "expected an object");
    reject_unknown(s, {"triangles"}, "k3");
    if (s.contains("triangles")) cfg.k3_triangles = get_int(s, "triangles", "k3.triangles");
    if (cfg.k3_triangles < 1) invalid("k3.triangles", "must be >= 1");
  }

  if (doc.contains("k10")) {
    const auto& s = doc["k10"];
    if (!s.is_object()) invalid("k10", "expected an object");
    reject_unknown(s, {"bracket", "tol", "samples"}, "k10");
    if (s.contains("bracket")) {
      const auto b = get_vector(s["bracket"], "k10.bracket");
      if (b.size() != 2 || !(b(0) < b(1))) invalid("k10.bracket", "expected [lo, hi] with lo < hi");
      cfg.k10.bracket_lo = b(0);
      cfg.k10.bracket_hi = b(1);
    }
    if (s.contains("tol")) cfg.k10.tol = get_number(s, "tol", "k10.tol");
    if (s.contains("samples")) cfg.k10.samples = get_int(s, "samples", "k10.samples");
    if (!(cfg.k10.tol > 0.0)) invalid("k10.tol", "must be positive");
    if (cfg.k10.samples < 1) invalid("k10.samples", "must be >= 1");
  }

  if (doc.contains("output")) {
    if (!doc["output"].is_string()) invalid("output", "expected a path");
    cfg.output = doc["output"];
  }
  if (doc.contains("format")) {
    if (doc["format"] == "json") cfg.format = OutputFormat::Json;
    else if (doc["format"] == "csv") cfg.format = OutputFormat::Csv;
    else invalid("format", "expected json or csv");
  }

  // per-command requirements
  if (cfg.command == Command::Simulate) {
    if (!cfg.schedule) invalid("schedule", "required for simulate");
    if (!cfg.initial) invalid("initial", "required for simulate");
    if (!(cfg.t_end > 0.0)) invalid("t_end", "must be positive");
  }
  const bool needs_points = cfg.command == Command::Equilibria || cfg.command == Command::Simulate;
  if (needs_points && cfg.points.empty()) invalid("points", "required for " + command);
  if (cfg.format == OutputFormat::Csv && cfg.command != Command::Simulate) {
    invalid("format", "csv output is only available for simulate");
  }
  return cfg;
}

namespace {

double resolve_kappa(const RunConfig& cfg) {
  if (cfg.kappa_source == "explicit") return cfg.kappa;
  if (cfg.kappa_source == "quadrature") {
    return groundstate::verify_kappa(cfg.quadrature).kappa_quadrature;
  }
  return kappa_closed_form();
}

json isolation_json(const IsolationReport& r) {
  json j;
  j["a_matrix"] = to_json(r.a_matrix);
  j["eigenvalues"] = to_json(r.eigenvalues);
  j["det_shift"] = r.det_shift;
  j["min_abs_shift_eigenvalue"] = r.min_abs_shift_eigenvalue;
  j["eig18_residual"] = r.eig18_residual;
  j["isolated"] = r.isolated;
  if (r.k3_sign_pattern) j["k3_sign_pattern"] = *r.k3_sign_pattern;
  return j;
}

json solution_json(const ReducedSolution& sol, const InteractionMatrix& m) {
  const auto eq = lift(sol);
  json j;
  j["x"] = to_json(sol.x);
  j["a"] = to_json(eq.a);
  j["c"] = to_json(eq.c);
  j["residual_norm"] = sol.residual_norm;
  j["isolation"] = isolation_json(isolation_check(sol, m));
  return j;
}

json header(const RunConfig& cfg, double kappa) {
  json j;
  j["command"] = std::string(command_name(cfg.command));
  j["kappa"] = kappa;
  j["kappa_source"] = cfg.kappa_source;
  j["seed"] = cfg.seed;
  return j;
}

RunOutput run_equilibria(const RunConfig& cfg) {
  const double kappa = resolve_kappa(cfg);
  const auto config = build_configuration(cfg.points);
  const auto m = interaction_matrix(config, kappa);
  const auto solutions = solve_equilibria(m, cfg.solver);
  json report = header(cfg, kappa);
  report["K"] = config.size();
  report["solutions"] = json::array();
  for (const auto& sol : solutions) report["solutions"].push_back(solution_json(sol, m));
  return {dump_json(report), std::nullopt};
}

std::string trajectory_csv(const dynamics::Trajectory& traj, int k) {
  std::string out = "t,s";
  for (int i = 1; i <= k; ++i) out += ",alpha_" + std::to_string(i);
  for (int i = 1; i <= k; ++i) out += ",beta_" + std::to_string(i);
  out += ",L,L_rate,dist_to_eq\n";
  using detail::format_double;
  for (std::size_t n = 0; n < traj.samples.size(); ++n) {
    const auto& s = traj.samples[n];
    out += format_double(s.t);
    out += ',';
    out += format_double(std::exp(s.t));
    for (int i = 0; i < k; ++i) {
      out += ',';
      out += format_double(s.alpha(i));
    }
    for (int i = 0; i < k; ++i) {
      out += ',';
      out += format_double(s.beta(i));
    }
    out += ',' + format_double(traj.lyapunov[n]);
    out += ',' + format_double(traj.lyapunov_rate[n]);
    out += ',' + format_double(traj.dist_to_eq[n]);
    out += '\n';
  }
  return out;
}

RunOutput run_simulate(const RunConfig& cfg) {
  const double kappa = resolve_kappa(cfg);
  const auto config = build_configuration(cfg.points);
  const auto m = interaction_matrix(config, kappa);
  const int k = config.size();

  const auto solutions = solve_equilibria(m, cfg.solver);
  std::vector<EquilibriumPoint> equilibria;
  for (const auto& s : solutions) equilibria.push_back(lift(s));

  dynamics::TrajectoryState init;
  const auto& is = *cfg.initial;
  if (is.alpha) {
    if (is.alpha->size() != k) {
      throw Error(ErrorKind::ValidationError, "initial: alpha length does not match K");
    }
    init.alpha = *is.alpha;
    init.beta = *is.beta;
  } else {
    if (is.equilibrium_index >= static_cast<int>(equilibria.size())) {
      throw Error(ErrorKind::ValidationError,
                  "initial: equilibrium index " + std::to_string(is.equilibrium_index) +
                      " out of range (" + std::to_string(equilibria.size()) + " found)");
    }
    init.alpha = (1.0 + is.offset) * equilibria[is.equilibrium_index].a;
    init.beta = 2.0 * init.alpha;
  }

  const auto& ss = *cfg.schedule;
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(k);
  const Eigen::VectorXd dir1 = ss.dir1.value_or(ones);
  const Eigen::VectorXd dir2 = ss.dir2.value_or(ones);
  if (dir1.size() != k || dir2.size() != k) {
    throw Error(ErrorKind::ValidationError, "schedule: direction length does not match K");
  }
  const auto schedule = dynamics::PerturbationSchedule::make(ss.kind, ss.amplitude, ss.rate, dir1, dir2);

  const auto traj = dynamics::integrate(init, m, schedule, cfg.t_end, cfg.integrator, equilibria);

  json report = header(cfg, kappa);
  report["K"] = k;
  report["t_end"] = cfg.t_end;
  report["samples"] = traj.samples.size();
  report["accepted_steps"] = traj.accepted_steps;
  report["rejected_steps"] = traj.rejected_steps;
  const auto& last = traj.samples.back();
  report["final"] = {{"t", last.t},
                     {"alpha", to_json(last.alpha)},
                     {"beta", to_json(last.beta)},
                     {"L", traj.lyapunov.back()},
                     {"dist_to_eq", traj.dist_to_eq.back()}};
  const double window = cfg.omega_window.value_or(0.25 * (cfg.t_end - init.t));
  const auto omega = dynamics::omega_limit_estimate(traj, window);
  report["omega"] = {{"t_from", omega.t_from},
                     {"lower", to_json(omega.lower)},
                     {"upper", to_json(omega.upper)},
                     {"diameter", omega.diameter},
                     {"final_dist_to_eq", omega.final_dist_to_eq}};
  report["equilibria"] = json::array();
  for (const auto& e : equilibria) {
    report["equilibria"].push_back({{"a", to_json(e.a)}, {"c", to_json(e.c)}});
  }

  RunOutput out;
  out.report = dump_json(report);
  if (cfg.format == OutputFormat::Csv) out.csv = trajectory_csv(traj, k);
  return out;
}

RunOutput run_k10(const RunConfig& cfg) {
  namespace cc = circulant;
  const double kappa = resolve_kappa(cfg);
  const auto fam = cc::build_family(kappa, cfg.k10.bracket_lo, cfg.k10.bracket_hi, cfg.k10.tol);
  const auto m = cc::family_matrix(fam);

  double max_rel = 0.0, max_abs = 0.0, max_tangent = 0.0, max_eig18 = 0.0;
  bool any_isolated = false;
  const double two_pi = 2.0 * std::numbers::pi;
  for (int i = 0; i < cfg.k10.samples; ++i) {
    const double t = two_pi * i / cfg.k10.samples;
    const auto sol = cc::family_member(t, fam);
    max_abs = std::max(max_abs, sol.residual_norm);
    max_rel = std::max(max_rel, sol.residual_norm / (6.0 * sol.x.cwiseAbs().maxCoeff()));
    const Eigen::MatrixXd j = reduced_jacobian(sol.x, m);
    max_tangent = std::max(max_tangent, (j * cc::family_tangent(t, fam)).norm() / j.norm());
    const auto iso = isolation_check(sol, m);
    max_eig18 = std::max(max_eig18, iso.eig18_residual);
    any_isolated = any_isolated || iso.isolated;
  }

  json report = header(cfg, kappa);
  report["B0"] = fam.b0;
  report["lambda4_at_B0"] = fam.lambdas[4];
  report["lambda"] = json(std::vector<double>(fam.lambdas.begin(), fam.lambdas.end()));
  report["sigma"] = json(std::vector<double>(fam.sigma.begin(), fam.sigma.end()));
  report["delta"] = json(std::vector<double>(fam.delta.begin(), fam.delta.end()));
  report["a"] = fam.coeff_a;
  report["b"] = fam.coeff_b;
  report["samples"] = cfg.k10.samples;
  report["max_family_residual"] = max_rel;
  report["max_family_residual_abs"] = max_abs;
  report["max_tangent_residual"] = max_tangent;
  report["max_eig18_residual"] = max_eig18;
  report["kernel_residual"] = cc::kernel_residual(fam);
  report["cube_balance_residual"] = cc::cube_balance_residual(fam);
  report["any_member_isolated"] = any_isolated;
  return {dump_json(report), std::nullopt};
}

RunOutput run_k3(const RunConfig& cfg) {
  const double kappa = resolve_kappa(cfg);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);

  json results = json::array();
  int isolated = 0, pattern = 0, total_solutions = 0;
  double min_det = std::numeric_limits<double>::infinity();
  double max_eig18 = 0.0;
  for (int tri = 0; tri < cfg.k3_triangles; ++tri) {
    std::vector<std::vector<double>> pts;
    for (;;) {
      pts.assign(3, std::vector<double>(kSpaceDimension));
      for (auto& p : pts) for (auto& c : p) c = coord(rng);
      const auto probe = build_configuration(pts);
      const auto& d = probe.distances();
      if (std::min({d(0, 1), d(0, 2), d(1, 2)}) >= 0.1) break;
    }
    const auto config = build_configuration(pts);
    const auto m = interaction_matrix(config, kappa);
    SolverOptions opts = cfg.solver;
    opts.seed = rng();
    const auto sols = solve_equilibria(m, opts);

    bool tri_ok = true;
    json entry;
    entry["points"] = pts;
    entry["solutions"] = json::array();
    for (const auto& s : sols) {
      const auto iso = isolation_check(s, m);
      ++total_solutions;
      tri_ok = tri_ok && iso.isolated && iso.k3_sign_pattern.value_or(false);
      if (iso.k3_sign_pattern.value_or(false)) ++pattern;
      min_det = std::min(min_det, std::abs(iso.det_shift));
      max_eig18 = std::max(max_eig18, iso.eig18_residual);
      entry["solutions"].push_back({{"x", to_json(s.x)},
                                    {"residual_norm", s.residual_norm},
                                    {"eigenvalues", to_json(iso.eigenvalues)},
                                    {"det_shift", iso.det_shift},
                                    {"eig18_residual", iso.eig18_residual},
                                    {"isolated", iso.isolated},
                                    {"k3_sign_pattern", iso.k3_sign_pattern.value_or(false)}});
    }
    if (tri_ok) ++isolated;
    entry["isolated"] = tri_ok;
    results.push_back(std::move(entry));
  }

  json report = header(cfg, kappa);
  report["triangles"] = cfg.k3_triangles;
  report["triangles_isolated"] = isolated;
  report["solutions"] = total_solutions;
  report["solutions_with_pattern"] = pattern;
  report["min_abs_det_shift"] = min_det;
  report["max_eig18_residual"] = max_eig18;
  report["results"] = std::move(results);
  return {dump_json(report), std::nullopt};
}

RunOutput run_kappa(const RunConfig& cfg) {
  const auto r = groundstate::verify_kappa(cfg.quadrature);
  json report;
  report["command"] = "kappa-check";
  report["r_max"] = cfg.quadrature.r_max;
  report["n_panels"] = cfg.quadrature.n_panels;
  report["rule"] = cfg.quadrature.rule == groundstate::QuadratureRule::GaussLegendre
                       ? "gauss-legendre" : "simpson";
  report["tail_order"] = cfg.quadrature.tail_order;
  report["integral_w73"] = r.integral_w73;
  report["norm_lw_sq"] = r.norm_lw_sq;
  report["tail_w73"] = r.tail_w73;
  report["tail_lw_sq"] = r.tail_lw_sq;
  report["kappa_quadrature"] = r.kappa_quadrature;
  report["kappa_closed"] = r.kappa_closed;
  report["rel_error"] = r.rel_error;
  report["refinement_error"] = r.refinement_error;
  return {dump_json(report), std::nullopt};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path);
}

}  // namespace

RunOutput run(const RunConfig& config) {
  switch (config.command) {
    case Command::Equilibria: return run_equilibria(config);
    case Command::Simulate: return run_simulate(config);
    case Command::K10: return run_k10(config);
    case Command::K3Check: return run_k3(config);
    case Command::KappaCheck: return run_kappa(config);
  }
  throw Error(ErrorKind::ValidationError, "unknown command");
}

int exit_code_for(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    return is_numerical(err->kind()) ? 2 : 1;
  }
  return 2;
}

std::string error_json(const std::exception& e) {
  json j;
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    j["error"] = std::string(error_name(err->kind()));
    if (const auto* ie = dynamic_cast<const IntegrationError*>(&e)) j["time"] = ie->time();
  } else {
    j["error"] = "InternalError";
  }
  j["message"] = e.what();
  j["exit_code"] = exit_code_for(e);
  return dump_json(j, 0);
}

int run_and_write(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const RunOutput result = run(config);
    if (result.csv) {
      if (config.output.empty()) {
        out << *result.csv;
      } else {
        write_file(config.output, *result.csv);
        write_file(config.output + ".summary.json", result.report);
      }
    } else if (config.output.empty()) {
      out << result.report;
    } else {
      write_file(config.output, result.report);
    }
    return 0;
  } catch (const std::exception& e) {
    err << error_json(e);
    return exit_code_for(e);
  }
}

}  // namespace bubblefield
