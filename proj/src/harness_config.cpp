// Scenario configs: JSON parsing, semantic validation, builtin catalog.
#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "oscbath/harness.hpp"

namespace oscbath {

namespace {

using nlohmann::json;

class ConfigErrors {
 public:
  void add(const std::string& path, const std::string& msg) {
    items_.push_back(path + ": " + msg);
  }
  bool empty() const { return items_.empty(); }
  void finish(const std::string& head) const {
    if (items_.empty()) return;
    std::string all = head;
    for (const auto& s : items_) {
      all += "\n  ";
      all += s;
    }
    throw std::invalid_argument(all);
  }

 private:
  std::vector<std::string> items_;
};

void check_keys(const json& obj, const std::string& path,
                const std::set<std::string>& allowed, ConfigErrors& errs) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) errs.add(path + it.key(), "unknown field");
}

double num_field(const json& obj, const std::string& path, const char* key,
                 double def, ConfigErrors& errs) {
  if (!obj.contains(key)) return def;
  const json& v = obj.at(key);
  if (!v.is_number()) {
    errs.add(path + key, "expected a number");
    return def;
  }
  return v.get<double>();
}

long int_field(const json& obj, const std::string& path, const char* key, long def,
               ConfigErrors& errs) {
  if (!obj.contains(key)) return def;
  const json& v = obj.at(key);
  if (!v.is_number_integer() && !(v.is_number() && v.get<double>() == std::floor(v.get<double>()))) {
    errs.add(path + key, "expected an integer");
    return def;
  }
  return v.get<long>();
}

std::string str_field(const json& obj, const std::string& path, const char* key,
                      const std::string& def, ConfigErrors& errs) {
  if (!obj.contains(key)) return def;
  const json& v = obj.at(key);
  if (!v.is_string()) {
    errs.add(path + key, "expected a string");
    return def;
  }
  return v.get<std::string>();
}

std::vector<double> num_list_field(const json& obj, const std::string& path,
                                   const char* key, ConfigErrors& errs) {
  std::vector<double> out;
  if (!obj.contains(key)) return out;
  const json& v = obj.at(key);
  if (!v.is_array()) {
    errs.add(path + key, "expected an array of numbers");
    return out;
  }
  for (const auto& e : v) {
    if (!e.is_number()) {
      errs.add(path + key, "expected an array of numbers");
      return {};
    }
    out.push_back(e.get<double>());
  }
  return out;
}

SpectralModel parse_spectral(const json& j, ConfigErrors& errs) {
  SpectralModel s;
  if (!j.is_object()) {
    errs.add("spectral", "expected an object");
    return s;
  }
  check_keys(j, "spectral.",
             {"kind", "M", "m", "gamma", "tau_L", "omega_cut", "omega_min",
              "table", "quadrature_points"},
             errs);
  const std::string kind = str_field(j, "spectral.", "kind", "white", errs);
  if (kind == "white")
    s.kind = SpectralKind::White;
  else if (kind == "lorentzian")
    s.kind = SpectralKind::Lorentzian;
  else if (kind == "tabulated")
    s.kind = SpectralKind::Tabulated;
  else
    errs.add("spectral.kind", "must be white, lorentzian, or tabulated");

  s.M = num_field(j, "spectral.", "M", 1.0, errs);
  s.m = num_field(j, "spectral.", "m", 1.0, errs);
  s.gamma = num_field(j, "spectral.", "gamma", 1.0, errs);
  s.tau_L = num_field(j, "spectral.", "tau_L", 1.0, errs);
  s.omega_cut = num_field(j, "spectral.", "omega_cut", 100.0, errs);
  s.omega_min = num_field(j, "spectral.", "omega_min", 0.0, errs);
  s.quadrature_points =
      static_cast<int>(int_field(j, "spectral.", "quadrature_points", 0, errs));

  if (j.contains("table")) {
    const json& t = j.at("table");
    if (!t.is_array() || t.empty()) {
      errs.add("spectral.table", "expected a non-empty array of [omega, g] pairs");
    } else {
      s.table_omega.resize(t.size());
      s.table_g.resize(t.size());
      for (std::size_t r = 0; r < t.size(); ++r) {
        const json& row = t.at(r);
        if (!row.is_array() || row.size() != 2 || !row.at(0).is_number() ||
            !row.at(1).is_number()) {
          errs.add("spectral.table", "row " + std::to_string(r) +
                                         " must be a [omega, g] number pair");
          break;
        }
        s.table_omega[r] = row.at(0).get<double>();
        s.table_g[r] = row.at(1).get<double>();
      }
      if (s.kind == SpectralKind::Tabulated && s.table_omega.size() > 0 &&
          !j.contains("omega_min")) {
        s.omega_min = s.table_omega[0];
        s.omega_cut = s.table_omega[s.table_omega.size() - 1];
      }
    }
  }
  return s;
}

ForceSpec parse_force(const json& j, ConfigErrors& errs) {
  ForceSpec f;
  if (!j.is_object()) {
    errs.add("force", "expected an object");
    return f;
  }
  check_keys(j, "force.",
             {"kind", "f0", "amplitude", "omega", "phase", "breakpoints", "values"},
             errs);
  const std::string kind = str_field(j, "force.", "kind", "zero", errs);
  if (kind == "zero")
    f.kind = ForceKind::Zero;
  else if (kind == "constant")
    f.kind = ForceKind::Constant;
  else if (kind == "sinusoid")
    f.kind = ForceKind::Sinusoid;
  else if (kind == "piecewise")
    f.kind = ForceKind::PiecewiseConstant;
  else
    errs.add("force.kind", "must be zero, constant, sinusoid, or piecewise");

  f.f0 = num_field(j, "force.", "f0", 0.0, errs);
  f.amplitude = num_field(j, "force.", "amplitude", 0.0, errs);
  f.omega = num_field(j, "force.", "omega", 0.0, errs);
  f.phase = num_field(j, "force.", "phase", 0.0, errs);
  f.breakpoints = num_list_field(j, "force.", "breakpoints", errs);
  f.values = num_list_field(j, "force.", "values", errs);
  return f;
}

CheckSpec parse_check(const json& j, std::size_t index, ConfigErrors& errs) {
  CheckSpec c;
  const std::string path = "checks[" + std::to_string(index) + "].";
  if (!j.is_object()) {
    errs.add("checks[" + std::to_string(index) + "]", "expected an object");
    return c;
  }
  check_keys(j, path,
             {"name", "type", "tol", "shift", "steps", "fit_lo", "fit_hi", "horizon"},
             errs);
  c.name = str_field(j, path, "name", "", errs);
  c.type = str_field(j, path, "type", "", errs);
  c.tol = num_field(j, path, "tol", 0.0, errs);
  c.shift = num_field(j, path, "shift", 0.5, errs);
  c.steps = int_field(j, path, "steps", 10000, errs);
  c.fit_lo = num_field(j, path, "fit_lo", 0.0, errs);
  c.fit_hi = num_field(j, path, "fit_hi", 0.0, errs);
  c.horizon = num_field(j, path, "horizon", 0.0, errs);
  return c;
}

const std::set<std::string> kOutputs = {
    "kernel",       "green",       "classical_mean", "classical_msd",
    "quantum_mean", "quantum_msd", "ensemble_stats", "trajectory",
    "fdt"};

const std::set<std::string> kCheckTypes = {
    "corr_asymptote",       "uncorr_asymptote",
    "sigma0_suppression",   "kick_consistency",
    "mean_identity",        "variance_floor",
    "white_variance_closed_form", "white_variance_value",
    "green_white_oracle",   "green_lorentzian_oracle",
    "green_convergence_ratio", "diffusion_slope",
    "high_t_reduction",     "high_t_variance_term",
    "fdt_mean",             "fdt_cov",
    "fdt_stationarity",     "micro_mean",
    "micro_var",            "shift_equivariance",
    "shift_break",          "origin_drift"};

bool needs_micro(const std::string& type) {
  return type.rfind("fdt_", 0) == 0 || type.rfind("micro_", 0) == 0 ||
         type.rfind("shift_", 0) == 0 || type == "origin_drift";
}

bool needs_white(const std::string& type) {
  return type == "corr_asymptote" || type == "uncorr_asymptote" ||
         type == "sigma0_suppression" || type == "kick_consistency" ||
         type == "white_variance_closed_form" || type == "white_variance_value" ||
         type == "green_white_oracle" || type == "green_convergence_ratio" ||
         type == "diffusion_slope";
}

void validate_scenario(const Scenario& s, ConfigErrors& errs) {
  if (s.id.empty()) errs.add("id", "must not be empty");
  for (char ch : s.id)
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-' && ch != '_' &&
        ch != '.' && ch != '=' && ch != '@') {
      errs.add("id", "may contain only letters, digits, and - _ . = @");
      break;
    }

  try {
    s.spectral.validate();
  } catch (const std::invalid_argument& e) {
    errs.add("spectral", e.what());
  }
  try {
    s.force.validate();
  } catch (const std::invalid_argument& e) {
    errs.add("force", e.what());
  }

  if (!(s.beta > 0.0)) errs.add("beta", "must be > 0");
  if (!(s.hbar > 0.0)) errs.add("hbar", "must be > 0");
  if (s.init.sigma0 < 0.0) errs.add("init.sigma0", "must be >= 0");
  if (!(s.horizon.t_max > 0.0)) errs.add("horizon.t_max", "must be > 0");
  if (s.horizon.h < 0.0) errs.add("horizon.h", "must be >= 0");
  if (s.horizon.dt < 0.0) errs.add("horizon.dt", "must be >= 0");
  if (s.horizon.h > 0.0 && s.horizon.h > s.horizon.t_max)
    errs.add("horizon.h", "must not exceed t_max");
  if (s.ensemble.size < 0) errs.add("ensemble.size", "must be >= 0");
  if (s.ensemble.oscillators < 0) errs.add("ensemble.oscillators", "must be >= 0");
  if (s.ensemble.checkpoints < 1) errs.add("ensemble.checkpoints", "must be >= 1");

  for (const auto& o : s.outputs)
    if (!kOutputs.count(o)) errs.add("outputs", "unknown output '" + o + "'");

  const bool quantum_out =
      std::count(s.outputs.begin(), s.outputs.end(), "quantum_mean") ||
      std::count(s.outputs.begin(), s.outputs.end(), "quantum_msd");
  if (quantum_out && !(s.init.sigma0 > 0.0))
    errs.add("init.sigma0", "must be > 0 when quantum outputs are requested");
  if (std::count(s.outputs.begin(), s.outputs.end(), "quantum_msd") &&
      s.init_mode == InitMode::Uncorrelated && s.spectral.kind != SpectralKind::White)
    errs.add("outputs", "quantum_msd in uncorrelated mode needs white noise");

  const bool micro_out =
      std::count(s.outputs.begin(), s.outputs.end(), "ensemble_stats") ||
      std::count(s.outputs.begin(), s.outputs.end(), "trajectory") ||
      std::count(s.outputs.begin(), s.outputs.end(), "fdt");
  bool micro_checks = false;
  bool gle_compare = false;
  bool fdt_checks = false;

  std::set<std::string> names;
  for (std::size_t i = 0; i < s.checks.size(); ++i) {
    const CheckSpec& c = s.checks[i];
    const std::string path = "checks[" + std::to_string(i) + "].";
    if (c.name.empty()) errs.add(path + "name", "must not be empty");
    if (!names.insert(c.name).second) errs.add(path + "name", "duplicate check name");
    if (!kCheckTypes.count(c.type)) {
      errs.add(path + "type", "unknown check type '" + c.type + "'");
      continue;
    }
    if (c.tol < 0.0) errs.add(path + "tol", "must be >= 0");
    if (needs_micro(c.type)) micro_checks = true;
    if (c.type == "micro_mean" || c.type == "micro_var") gle_compare = true;
    if (c.type.rfind("fdt_", 0) == 0) fdt_checks = true;

    if (needs_white(c.type) && s.spectral.kind != SpectralKind::White)
      errs.add(path + "type", c.type + " needs spectral.kind = white");
    if (c.type == "green_lorentzian_oracle" && s.spectral.kind != SpectralKind::Lorentzian)
      errs.add(path + "type", "needs spectral.kind = lorentzian");
    if ((c.type == "high_t_reduction" || c.type == "high_t_variance_term") &&
        s.spectral.kind == SpectralKind::White)
      errs.add(path + "type", c.type + " needs a smooth (non-white) density");
    if ((c.type == "corr_asymptote" || c.type == "uncorr_asymptote" ||
         c.type == "sigma0_suppression" || c.type == "diffusion_slope") &&
        !(s.spectral.gamma > 0.0))
      errs.add(path + "type", c.type + " needs spectral.gamma > 0");
    if ((c.type == "corr_asymptote" || c.type == "uncorr_asymptote") &&
        s.spectral.gamma * s.horizon.t_max < 16.0)
      errs.add(path + "type",
               "asymptote checks need gamma * t_max >= 16 to settle");
    if (c.type == "white_variance_value" &&
        !(s.spectral.M == 1.0 && s.spectral.gamma == 1.0 && s.beta == 1.0 &&
          s.hbar == 1.0 && s.init.sigma0 == 1.0))
      errs.add(path + "type",
               "the pinned spread value holds for M = gamma = beta = hbar = sigma0 = 1");
    if (c.type == "diffusion_slope") {
      if (!(c.fit_lo > 0.0 && c.fit_hi > c.fit_lo && c.fit_hi <= s.horizon.t_max))
        errs.add(path + "fit_lo", "need 0 < fit_lo < fit_hi <= t_max");
    }
    if (c.type == "origin_drift" && s.lagrangian != LagrangianForm::Bilinear)
      errs.add(path + "type", "origin_drift studies the bilinear coupling");
    if ((c.type == "shift_equivariance" || c.type == "shift_break") && c.steps < 1)
      errs.add(path + "steps", "must be >= 1");
  }

  if ((micro_checks || micro_out) && s.ensemble.oscillators < 1)
    errs.add("ensemble.oscillators",
             "explicit-bath checks or outputs need oscillators >= 1");
  const bool needs_members = fdt_checks || gle_compare ||
      std::count(s.outputs.begin(), s.outputs.end(), "fdt") ||
      std::count(s.outputs.begin(), s.outputs.end(), "ensemble_stats");
  if (needs_members && s.ensemble.size < 2)
    errs.add("ensemble.size", "ensemble statistics need size >= 2");
  if (fdt_checks && s.init.v0 != 0.0)
    errs.add("init.v0",
             "fdt checks need v0 = 0; the synthesized force is offset by the "
             "initial velocity otherwise");

  if (s.ensemble.oscillators >= 1 && s.spectral.kind != SpectralKind::Tabulated) {
    const double dt = s.horizon.dt > 0.0 ? s.horizon.dt : 0.4 / s.spectral.omega_cut;
    if (!(dt * s.spectral.omega_cut < 0.5))
      errs.add("horizon.dt", "must resolve the fastest oscillator: dt * omega_cut < 0.5");
    if (gle_compare && s.ensemble.oscillators >= 2) {
      const double dw = (s.spectral.omega_cut - s.spectral.low_cut()) /
                        (s.ensemble.oscillators - 1);
      const double t_rec = 2.0 * 3.14159265358979323846 / dw;
      if (s.horizon.t_max >= 0.5 * t_rec)
        errs.add("horizon.t_max",
                 "exceeds half the recurrence time of the discrete bath; "
                 "increase ensemble.oscillators or shorten the run");
    }
  }
}

Scenario parse_scenario_json(const json& j) {
  ConfigErrors errs;
  Scenario s;
  if (!j.is_object()) {
    errs.add("config", "top level must be a JSON object");
    errs.finish("config invalid");
  }
  check_keys(j, "",
             {"id", "spectral", "beta", "hbar", "init", "force", "init_mode",
              "lagrangian", "horizon", "ensemble", "outputs", "checks"},
             errs);

  s.id = str_field(j, "", "id", "", errs);
  if (j.contains("spectral"))
    s.spectral = parse_spectral(j.at("spectral"), errs);
  else
    errs.add("spectral", "missing");
  s.beta = num_field(j, "", "beta", 1.0, errs);
  s.hbar = num_field(j, "", "hbar", 1.0, errs);

  if (j.contains("init")) {
    const json& ji = j.at("init");
    if (!ji.is_object()) {
      errs.add("init", "expected an object");
    } else {
      check_keys(ji, "init.", {"x0", "v0", "sigma0"}, errs);
      s.init.x0 = num_field(ji, "init.", "x0", 0.0, errs);
      s.init.v0 = num_field(ji, "init.", "v0", 0.0, errs);
      s.init.sigma0 = num_field(ji, "init.", "sigma0", 0.0, errs);
    }
  }
  if (j.contains("force")) s.force = parse_force(j.at("force"), errs);

  const std::string mode = str_field(j, "", "init_mode", "correlated", errs);
  if (mode == "correlated")
    s.init_mode = InitMode::Correlated;
  else if (mode == "uncorrelated")
    s.init_mode = InitMode::Uncorrelated;
  else
    errs.add("init_mode", "must be correlated or uncorrelated");

  const std::string lag = str_field(j, "", "lagrangian", "translated", errs);
  if (lag == "translated")
    s.lagrangian = LagrangianForm::Translated;
  else if (lag == "bilinear")
    s.lagrangian = LagrangianForm::Bilinear;
  else
    errs.add("lagrangian", "must be translated or bilinear");

  if (j.contains("horizon")) {
    const json& jh = j.at("horizon");
    if (!jh.is_object()) {
      errs.add("horizon", "expected an object");
    } else {
      check_keys(jh, "horizon.", {"t_max", "h", "dt"}, errs);
      s.horizon.t_max = num_field(jh, "horizon.", "t_max", 10.0, errs);
      s.horizon.h = num_field(jh, "horizon.", "h", 0.0, errs);
      s.horizon.dt = num_field(jh, "horizon.", "dt", 0.0, errs);
    }
  }
  if (j.contains("ensemble")) {
    const json& je = j.at("ensemble");
    if (!je.is_object()) {
      errs.add("ensemble", "expected an object");
    } else {
      check_keys(je, "ensemble.", {"size", "oscillators", "master_seed", "checkpoints"},
                 errs);
      s.ensemble.size = int_field(je, "ensemble.", "size", 0, errs);
      s.ensemble.oscillators =
          static_cast<int>(int_field(je, "ensemble.", "oscillators", 0, errs));
      s.ensemble.master_seed = static_cast<std::uint64_t>(
          int_field(je, "ensemble.", "master_seed", 1, errs));
      s.ensemble.checkpoints =
          static_cast<int>(int_field(je, "ensemble.", "checkpoints", 10, errs));
    }
  }
  if (j.contains("outputs")) {
    const json& jo = j.at("outputs");
    if (!jo.is_array()) {
      errs.add("outputs", "expected an array of strings");
    } else {
      for (const auto& e : jo) {
        if (!e.is_string()) {
          errs.add("outputs", "expected an array of strings");
          break;
        }
        s.outputs.push_back(e.get<std::string>());
      }
    }
  }
  if (j.contains("checks")) {
    const json& jc = j.at("checks");
    if (!jc.is_array()) {
      errs.add("checks", "expected an array");
    } else {
      for (std::size_t i = 0; i < jc.size(); ++i)
        s.checks.push_back(parse_check(jc.at(i), i, errs));
    }
  }

  if (errs.empty()) validate_scenario(s, errs);
  errs.finish("config invalid");
  return s;
}

// ---- builtin catalog ---------------------------------------------------------

struct Builtin {
  const char* name;
  const char* text;
};

const Builtin kBuiltins[] = {
    {"white-correlated-vs-uncorrelated", R"CFG({
  "id": "white-correlated-vs-uncorrelated",
  "spectral": {"kind": "white", "M": 1, "m": 1, "gamma": 1, "omega_cut": 200},
  "beta": 1, "hbar": 1,
  "init": {"x0": 1, "v0": 2, "sigma0": 1},
  "init_mode": "uncorrelated",
  "horizon": {"t_max": 20},
  "outputs": ["kernel", "green", "classical_mean", "classical_msd",
              "quantum_mean", "quantum_msd"],
  "checks": [
    {"name": "relaxation-matches-exponential", "type": "green_white_oracle", "tol": 1e-4},
    {"name": "forward-drift-asymptote", "type": "corr_asymptote", "tol": 1e-6},
    {"name": "prepared-drift-asymptote", "type": "uncorr_asymptote", "tol": 1e-6},
    {"name": "initial-spread-forgotten", "type": "sigma0_suppression", "tol": 1e-6},
    {"name": "kick-reproduces-preparation", "type": "kick_consistency", "tol": 1e-9},
    {"name": "mean-agrees-with-classical", "type": "mean_identity", "tol": 0},
    {"name": "spread-matches-closed-form", "type": "white_variance_closed_form", "tol": 1e-3},
    {"name": "spread-value-pinned", "type": "white_variance_value", "tol": 1e-3}
  ]
})CFG"},
    {"forced-colored", R"CFG({
  "id": "forced-colored",
  "spectral": {"kind": "lorentzian", "M": 1, "m": 1, "gamma": 0.5, "tau_L": 2,
               "omega_cut": 10},
  "beta": 1, "hbar": 1,
  "init": {"x0": 0.5, "v0": 0, "sigma0": 1},
  "force": {"kind": "sinusoid", "amplitude": 0.5, "omega": 1.2, "phase": 0},
  "init_mode": "correlated",
  "horizon": {"t_max": 40},
  "outputs": ["kernel", "green", "classical_mean", "classical_msd",
              "quantum_mean", "quantum_msd"],
  "checks": [
    {"name": "relaxation-matches-embedding", "type": "green_lorentzian_oracle", "tol": 1e-4},
    {"name": "mean-agrees-with-classical", "type": "mean_identity", "tol": 0},
    {"name": "spread-never-below-initial", "type": "variance_floor", "tol": 1e-12},
    {"name": "kernel-is-high-t-limit", "type": "high_t_reduction", "tol": 1e-3},
    {"name": "thermal-spread-term-classical", "type": "high_t_variance_term", "tol": 0.005}
  ]
})CFG"},
    {"fdt-check", R"CFG({
  "id": "fdt-check",
  "spectral": {"kind": "white", "M": 1, "m": 1, "gamma": 1, "omega_cut": 200},
  "beta": 1, "hbar": 1,
  "init": {"x0": 0.7, "v0": 0, "sigma0": 1},
  "init_mode": "correlated",
  "horizon": {"t_max": 2},
  "ensemble": {"size": 10000, "oscillators": 2000, "master_seed": 61},
  "outputs": ["fdt"],
  "checks": [
    {"name": "force-mean-vanishes", "type": "fdt_mean", "tol": 4},
    {"name": "force-correlation-matches-kernel", "type": "fdt_cov", "tol": 0.05},
    {"name": "force-correlation-stationary", "type": "fdt_stationarity", "tol": 0.05}
  ]
})CFG"},
    {"micro-convergence", R"CFG({
  "id": "micro-convergence",
  "spectral": {"kind": "white", "M": 1, "m": 1, "gamma": 1, "omega_cut": 200,
               "omega_min": 0.02},
  "beta": 1, "hbar": 1,
  "init": {"x0": 1, "v0": 2, "sigma0": 0},
  "init_mode": "correlated",
  "lagrangian": "translated",
  "horizon": {"t_max": 5, "dt": 0.002},
  "ensemble": {"size": 200, "oscillators": 2000, "master_seed": 127, "checkpoints": 10},
  "outputs": ["ensemble_stats"],
  "checks": [
    {"name": "ensemble-mean-tracks-prediction", "type": "micro_mean", "tol": 3},
    {"name": "ensemble-variance-tracks-prediction", "type": "micro_var", "tol": 0.10}
  ]
})CFG"},
    {"lagrangian-contrast", R"CFG({
  "id": "lagrangian-contrast",
  "spectral": {"kind": "white", "M": 1, "m": 1, "gamma": 1, "omega_cut": 200,
               "omega_min": 0.02},
  "beta": 1, "hbar": 1,
  "init": {"x0": 1, "v0": 0, "sigma0": 0},
  "init_mode": "correlated",
  "lagrangian": "bilinear",
  "horizon": {"t_max": 20, "dt": 0.002},
  "ensemble": {"size": 200, "oscillators": 2000, "master_seed": 11},
  "outputs": [],
  "checks": [
    {"name": "joint-shift-leaves-dynamics", "type": "shift_equivariance",
     "tol": 1e-8, "shift": 0.5, "steps": 10000},
    {"name": "bilinear-breaks-shift", "type": "shift_break",
     "tol": 1e-8, "shift": 0.5, "steps": 10000},
    {"name": "bilinear-mean-pulled-to-origin", "type": "origin_drift",
     "tol": 3, "horizon": 1.0}
  ]
})CFG"},
    {"diffusion-law", R"CFG({
  "id": "diffusion-law",
  "spectral": {"kind": "white", "M": 1, "m": 1, "gamma": 1, "omega_cut": 200},
  "beta": 1, "hbar": 1,
  "init": {"x0": 0, "v0": 0, "sigma0": 0},
  "init_mode": "correlated",
  "horizon": {"t_max": 40},
  "outputs": ["kernel", "green", "classical_msd"],
  "checks": [
    {"name": "long-time-slope-einstein", "type": "diffusion_slope",
     "tol": 0.02, "fit_lo": 20, "fit_hi": 40},
    {"name": "relaxation-error-halves-twice", "type": "green_convergence_ratio", "tol": 0.8}
  ]
})CFG"},
};

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config invalid\n  json: ") + e.what());
  }
  return parse_scenario_json(j);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& b : kBuiltins) v.push_back(b.name);
    return v;
  }();
  return names;
}

std::string builtin_config_json(const std::string& name) {
  for (const auto& b : kBuiltins)
    if (name == b.name) return b.text;
  std::string msg = "unknown scenario '" + name + "'; available:";
  for (const auto& b : kBuiltins) msg += std::string(" ") + b.name;
  throw std::invalid_argument(msg);
}

Scenario builtin_scenario(const std::string& name) {
  return parse_scenario(builtin_config_json(name));
}

}  // namespace oscbath
