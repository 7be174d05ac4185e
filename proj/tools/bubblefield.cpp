// bubblefield: command-line front end for the multi-bubble reduction toolkit.
//
//   bubblefield <equilibria|simulate|k10|k3-check|kappa-check>
//               [--config <path>] [--output <path>] [--seed <u64>] [--tol <f64>]

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>

#include <CLI11.hpp>

#include "bubblefield/error.hpp"
#include "bubblefield/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Finite-dimensional reduction of 5-D multi-bubble dynamics"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output;
  std::uint64_t seed = 0;
  double tol = 0.0;

  const std::pair<const char*, const char*> commands[] = {
      {"equilibria", "solve the reduced equilibrium system and check isolation"},
      {"simulate", "integrate the modulation ODE; writes a CSV trajectory"},
      {"k10", "build the ten-point circulant family and its diagnostics"},
      {"k3-check", "isolation sweep over random triangles"},
      {"kappa-check", "evaluate the interaction constant by radial quadrature"},
  };
  for (const auto& [name, description] : commands) {
    auto* sub = app.add_subcommand(name, description);
    sub->add_option("--config", config_path, "JSON run configuration");
    sub->add_option("--output", output, "output path (default: stdout)");
    sub->add_option("--seed", seed, "random seed override");
    sub->add_option("--tol", tol, "solver tolerance override")->check(CLI::PositiveNumber);
  }
  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  const auto* sub = app.get_subcommands().front();

  try {
    std::string document;
    if (!config_path.empty()) {
      std::ifstream in(config_path, std::ios::binary);
      if (!in) {
        throw bubblefield::Error(bubblefield::ErrorKind::IoError, "cannot open " + config_path);
      }
      std::ostringstream ss;
      ss << in.rdbuf();
      document = ss.str();
    } else {
      document = "{\"command\": \"" + command + "\"}";
    }

    auto config = bubblefield::parse_run_config(document);
    if (std::string(bubblefield::command_name(config.command)) != command) {
      throw bubblefield::Error(bubblefield::ErrorKind::ValidationError,
                               "command: config says '" +
                                   std::string(bubblefield::command_name(config.command)) +
                                   "' but '" + command + "' was invoked");
    }
    if (sub->count("--output") > 0) config.output = output;
    if (sub->count("--seed") > 0) {
      config.seed = seed;
      config.solver.seed = seed;
    }
    if (sub->count("--tol") > 0) config.solver.tol = tol;

    return bubblefield::run_and_write(config, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << bubblefield::error_json(e);
    return bubblefield::exit_code_for(e);
  }
}
