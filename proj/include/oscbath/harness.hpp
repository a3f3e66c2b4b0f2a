// harness.hpp -- scenario configs, reproducible experiments, pass/fail reports.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oscbath/bath.hpp"
#include "oscbath/gle.hpp"
#include "oscbath/quantum.hpp"

namespace oscbath {

struct HorizonSpec {
  double t_max = 10.0;
  double h = 0.0;   // reduced-dynamics step; 0 selects default_green_step
  double dt = 0.0;  // explicit-bath step; 0 selects 0.4 / omega_cut
};

struct EnsembleSpec {
  long size = 0;      // stochastic members; 0 disables ensemble work
  int oscillators = 0;  // explicit bath modes; 0 disables micro runs
  std::uint64_t master_seed = 1;
  int checkpoints = 10;
};

// One acceptance-style assertion on scenario results. tol carries the
// type-specific threshold; the remaining knobs apply to the few check types
// that need them and are ignored elsewhere.
struct CheckSpec {
  std::string name;
  std::string type;
  double tol = 0.0;
  double shift = 0.5;                  // shift_equivariance / shift_break
  long steps = 10000;                  // shift_equivariance / shift_break
  double fit_lo = 0.0, fit_hi = 0.0;   // diffusion_slope window
  double horizon = 0.0;                // origin_drift horizon (0 = 1.0)
};

struct Scenario {
  std::string id;
  SpectralModel spectral;
  double beta = 1.0;
  double hbar = 1.0;
  ClassicalInit init;  // sigma0 doubles as the packet spread
  ForceSpec force;
  InitMode init_mode = InitMode::Correlated;
  LagrangianForm lagrangian = LagrangianForm::Translated;
  HorizonSpec horizon;
  EnsembleSpec ensemble;
  std::vector<std::string> outputs;
  std::vector<CheckSpec> checks;
};

// JSON front end. Both throw std::invalid_argument carrying every problem
// found, one per line, with dotted field paths.
Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::string& path);

const std::vector<std::string>& builtin_names();
std::string builtin_config_json(const std::string& name);
Scenario builtin_scenario(const std::string& name);

struct CheckResult {
  std::string name;
  std::string status;  // pass | fail | skipped
  double measured = 0.0;
  double target = 0.0;
  double tol = 0.0;
  std::string note;
};

struct Report {
  std::string scenario_id;
  std::vector<CheckResult> checks;
  std::vector<std::string> artifacts;  // files written, relative to out_dir

  bool all_passed() const;  // skipped entries do not count against this
  std::string to_text() const;
};

struct RunOptions {
  std::string out_dir = "runs";
  std::optional<std::uint64_t> seed;  // overrides the scenario master seed
  int threads = 1;
  bool write_outputs = true;
};

// Builds the reduced-dynamics objects, writes the requested outputs under
// out_dir/<id>/, evaluates every check, and writes report.txt alongside.
Report run_scenario(const Scenario& scenario, const RunOptions& opts);

// Ensemble statistics of the explicit microscopic system at the checkpoint
// times, against which the reduced predictions are judged.
struct EnsembleStats {
  Array t;
  Array mean;
  Array se;   // standard error of the mean
  Array var;  // unbiased variance across members
  long members = 0;
};

EnsembleStats micro_ensemble(const Scenario& scenario, const RunOptions& opts);

// The explicit-vs-reduced comparison on its own: mean within tol_mean standard
// errors at every checkpoint, variance within tol_var relative at the last
// one. With the Bilinear form the comparison is flagged skipped instead, since
// the reduced equation models the translated coupling.
Report micro_vs_gle(const Scenario& scenario, const RunOptions& opts,
                    double tol_mean = 3.0, double tol_var = 0.10);

struct SweepResult {
  std::string param;
  std::vector<double> values;
  std::vector<Report> reports;
};

// Re-runs the config once per value with the dotted numeric parameter (for
// example init.x0 or ensemble.oscillators) replaced. Each run lands in its
// own subdirectory; an index file maps values to outcomes.
SweepResult sweep(const std::string& config_json, const std::string& param,
                  const std::vector<double>& values, const RunOptions& opts);

void write_ensemble_csv(const EnsembleStats& stats, const std::string& path);

}  // namespace oscbath
