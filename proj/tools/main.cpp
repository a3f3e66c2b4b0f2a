// Command-line front end: run scenarios, sweep parameters, inspect builtins.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oscbath/harness.hpp"

namespace {

// A config argument is either a JSON file on disk or a builtin scenario name.
std::string resolve_config(const std::string& arg) {
  if (std::filesystem::exists(arg)) {
    std::ifstream in(arg);
    if (!in) throw std::invalid_argument("cannot open config: " + arg);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }
  return oscbath::builtin_config_json(arg);  // throws with the available names
}

int exit_code(const std::vector<oscbath::Report>& reports) {
  for (const auto& r : reports)
    if (!r.all_passed()) return 1;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"oscillator-bath reduced dynamics toolkit"};
  app.require_subcommand(1);

  oscbath::RunOptions opts;
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "override the scenario master seed");
  app.add_option("--out", opts.out_dir, "output directory (default: runs)");
  app.add_option("--threads", opts.threads, "worker threads for ensemble work")
      ->check(CLI::PositiveNumber);

  std::string run_config;
  auto* run_cmd = app.add_subcommand("run", "run a scenario and evaluate its checks");
  run_cmd->add_option("config", run_config, "config file or builtin scenario name")
      ->required();

  std::string sweep_config, sweep_param;
  std::vector<double> sweep_values;
  auto* sweep_cmd =
      app.add_subcommand("sweep", "re-run a scenario across parameter values");
  sweep_cmd->add_option("config", sweep_config, "config file or builtin scenario name")
      ->required();
  sweep_cmd->add_option("--param", sweep_param, "dotted parameter path, e.g. init.x0")
      ->required();
  sweep_cmd->add_option("--values", sweep_values, "comma-separated values")
      ->required()
      ->delimiter(',');

  std::string scenario_name;
  bool list_scenarios = false;
  auto* scen_cmd =
      app.add_subcommand("scenario", "print a builtin scenario config as JSON");
  scen_cmd->add_option("name", scenario_name, "builtin scenario name");
  scen_cmd->add_flag("--list", list_scenarios, "list builtin scenario names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (seed_opt->count() > 0) opts.seed = seed;

    if (*run_cmd) {
      const oscbath::Scenario scn = oscbath::parse_scenario(resolve_config(run_config));
      const oscbath::Report report = oscbath::run_scenario(scn, opts);
      std::fputs(report.to_text().c_str(), stdout);
      return exit_code({report});
    }

    if (*sweep_cmd) {
      const oscbath::SweepResult result = oscbath::sweep(
          resolve_config(sweep_config), sweep_param, sweep_values, opts);
      for (const auto& report : result.reports) std::fputs(report.to_text().c_str(), stdout);
      return exit_code(result.reports);
    }

    if (*scen_cmd) {
      if (list_scenarios) {
        for (const auto& name : oscbath::builtin_names()) std::puts(name.c_str());
        return 0;
      }
      if (scenario_name.empty())
        throw std::invalid_argument("scenario: give a name or --list");
      std::fputs(oscbath::builtin_config_json(scenario_name).c_str(), stdout);
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
