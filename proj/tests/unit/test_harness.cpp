#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "oscbath/harness.hpp"
#include "oscbath/rng.hpp"

using namespace oscbath;
using doctest::Contains;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Small explicit-bath scenario: 40 modes over [0.5, 20] keep the recurrence
// time near 12, far beyond the 1-unit horizon.
const char* kMicroConfig = R"({
  "id": "micro-small",
  "spectral": {"kind": "white", "M": 1, "m": 1, "gamma": 1,
               "omega_cut": 20, "omega_min": 0.5},
  "beta": 1, "hbar": 1,
  "init": {"x0": 0.3, "v0": 0, "sigma0": 0},
  "init_mode": "correlated",
  "horizon": {"t_max": 1},
  "ensemble": {"size": 64, "oscillators": 40, "master_seed": 9, "checkpoints": 5}
})";

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("builtin registry") {
  CHECK(builtin_names().size() == 6);
  for (const std::string& name : builtin_names()) {
    const Scenario s = builtin_scenario(name);
    CHECK(s.id == name);
  }
  CHECK_THROWS_WITH_AS(builtin_scenario("nope"), Contains("available"),
                       std::invalid_argument);
}

TEST_CASE("config validation") {
  SUBCASE("malformed json") {
    CHECK_THROWS_WITH_AS(parse_scenario("{nope"), Contains("config invalid"),
                         std::invalid_argument);
  }
  SUBCASE("unknown field") {
    CHECK_THROWS_WITH_AS(
        parse_scenario(R"({"id": "x", "bogus": 1,
                           "spectral": {"kind": "white", "gamma": 1}})"),
        Contains("unknown field"), std::invalid_argument);
  }
  SUBCASE("unknown check type") {
    CHECK_THROWS_WITH_AS(
        parse_scenario(R"({"id": "x",
                           "spectral": {"kind": "white", "gamma": 1},
                           "checks": [{"name": "c", "type": "nope", "tol": 1}]})"),
        Contains("unknown check type"), std::invalid_argument);
  }
  SUBCASE("id charset") {
    CHECK_THROWS_WITH_AS(
        parse_scenario(R"({"id": "bad id!",
                           "spectral": {"kind": "white", "gamma": 1}})"),
        Contains("letters, digits"), std::invalid_argument);
  }
  SUBCASE("force statistics require a resting particle") {
    CHECK_THROWS_WITH_AS(
        parse_scenario(R"({"id": "x",
                           "spectral": {"kind": "white", "gamma": 1, "omega_cut": 20},
                           "init": {"x0": 0, "v0": 1, "sigma0": 0},
                           "horizon": {"t_max": 1},
                           "ensemble": {"size": 8, "oscillators": 20},
                           "checks": [{"name": "c", "type": "fdt_mean", "tol": 4}]})"),
        Contains("v0 = 0"), std::invalid_argument);
  }
  SUBCASE("explicit-bath work needs oscillators") {
    CHECK_THROWS_WITH_AS(
        parse_scenario(R"({"id": "x",
                           "spectral": {"kind": "white", "gamma": 1, "omega_cut": 20},
                           "horizon": {"t_max": 1},
                           "ensemble": {"size": 8},
                           "checks": [{"name": "c", "type": "micro_mean", "tol": 3}]})"),
        Contains("oscillators >= 1"), std::invalid_argument);
  }
  SUBCASE("ensemble statistics need members") {
    CHECK_THROWS_WITH_AS(
        parse_scenario(R"({"id": "x",
                           "spectral": {"kind": "white", "gamma": 1, "omega_cut": 20},
                           "horizon": {"t_max": 1},
                           "ensemble": {"size": 1, "oscillators": 20},
                           "checks": [{"name": "c", "type": "micro_mean", "tol": 3}]})"),
        Contains("size >= 2"), std::invalid_argument);
  }
  SUBCASE("time step must resolve the fastest oscillator") {
    CHECK_THROWS_WITH_AS(
        parse_scenario(R"({"id": "x",
                           "spectral": {"kind": "white", "gamma": 1, "omega_cut": 20},
                           "horizon": {"t_max": 1, "dt": 0.1},
                           "ensemble": {"size": 8, "oscillators": 20},
                           "checks": [{"name": "c", "type": "micro_mean", "tol": 3}]})"),
        Contains("dt * omega_cut"), std::invalid_argument);
  }
  SUBCASE("horizon must stay inside the recurrence time") {
    CHECK_THROWS_WITH_AS(
        parse_scenario(R"({"id": "x",
                           "spectral": {"kind": "white", "gamma": 1, "omega_cut": 20},
                           "horizon": {"t_max": 10, "dt": 0.02},
                           "ensemble": {"size": 8, "oscillators": 20},
                           "checks": [{"name": "c", "type": "micro_mean", "tol": 3}]})"),
        Contains("recurrence"), std::invalid_argument);
  }
  SUBCASE("missing config file") {
    CHECK_THROWS_WITH_AS(load_scenario("definitely_not_here.json"),
                         Contains("cannot open config"), std::invalid_argument);
  }
}

TEST_CASE("ensemble statistics are deterministic for any worker count") {
  const Scenario scn = parse_scenario(kMicroConfig);

  RunOptions a;
  a.threads = 1;
  a.write_outputs = false;
  const EnsembleStats sa = micro_ensemble(scn, a);

  RunOptions b = a;
  b.threads = 5;
  const EnsembleStats sb = micro_ensemble(scn, b);

  CHECK(sa.members == 64);
  CHECK(sa.t.size() == 6);
  // sharp start: every member begins at x0, up to summation rounding
  CHECK(sa.mean[0] == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(sa.var[0] <= 1e-12);
  CHECK(sa.se[0] <= 1e-6);

  write_ensemble_csv(sa, "determinism_a.csv");
  write_ensemble_csv(sb, "determinism_b.csv");
  CHECK(slurp("determinism_a.csv") == slurp("determinism_b.csv"));
  std::remove("determinism_a.csv");
  std::remove("determinism_b.csv");
}

TEST_CASE("reduced prediction is exempt from the bilinear form") {
  std::string cfg(kMicroConfig);
  cfg.insert(cfg.rfind('}'), R"(, "lagrangian": "bilinear")");
  const Scenario scn = parse_scenario(cfg);

  RunOptions opts;
  opts.write_outputs = false;
  const Report r = micro_vs_gle(scn, opts);
  REQUIRE(r.checks.size() == 2);
  CHECK(r.checks[0].status == "skipped");
  CHECK(r.checks[1].status == "skipped");
  CHECK(r.all_passed());
}

TEST_CASE("run_scenario writes the requested artifacts") {
  const Scenario scn = parse_scenario(R"({
    "id": "artifact-test",
    "spectral": {"kind": "white", "M": 1, "m": 1, "gamma": 1, "omega_cut": 200},
    "horizon": {"t_max": 2},
    "init": {"x0": 1, "v0": 0, "sigma0": 1},
    "outputs": ["kernel", "green"],
    "checks": [{"name": "mean-agrees", "type": "mean_identity", "tol": 0}]
  })");

  namespace fs = std::filesystem;
  RunOptions opts;
  opts.out_dir = "harness_unit_runs";
  const Report r = run_scenario(scn, opts);

  CHECK(r.all_passed());
  REQUIRE(r.artifacts.size() == 3);
  for (const std::string& rel : r.artifacts)
    CHECK(fs::exists(fs::path(opts.out_dir) / rel));
  CHECK(fs::exists("harness_unit_runs/artifact-test/report.txt"));

  const std::string text = r.to_text();
  CHECK(text.find("scenario artifact-test") == 0);
  CHECK(text.find("CHECK mean-agrees pass") != std::string::npos);

  fs::remove_all(opts.out_dir);
}

TEST_CASE("a failing check fails the report") {
  const Scenario scn = parse_scenario(R"({
    "id": "must-fail",
    "spectral": {"kind": "white", "M": 1, "m": 1, "gamma": 1, "omega_cut": 200},
    "horizon": {"t_max": 2},
    "checks": [{"name": "impossible", "type": "green_white_oracle", "tol": 1e-300}]
  })");
  RunOptions opts;
  opts.write_outputs = false;
  const Report r = run_scenario(scn, opts);
  CHECK(!r.all_passed());
  CHECK(r.to_text().find("CHECK impossible fail") != std::string::npos);
}

TEST_CASE("sweep mechanics") {
  const std::string cfg = R"({
    "id": "sw",
    "spectral": {"kind": "white", "M": 1, "m": 1, "gamma": 1, "omega_cut": 200},
    "beta": 1.0,
    "horizon": {"t_max": 2},
    "outputs": [],
    "checks": []
  })";

  RunOptions opts;
  opts.write_outputs = false;
  const SweepResult r = sweep(cfg, "beta", {0.5, 1.0, 2.0}, opts);
  REQUIRE(r.reports.size() == 3);
  CHECK(r.reports[0].scenario_id == "sw@beta=0.5");
  CHECK(r.reports[1].scenario_id == "sw@beta=1");
  CHECK(r.reports[2].scenario_id == "sw@beta=2");
  CHECK(r.values == std::vector<double>{0.5, 1.0, 2.0});

  CHECK_THROWS_WITH_AS(sweep(cfg, "spectral.nope", {1.0}, opts),
                       Contains("no such parameter"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(sweep(cfg, "id", {1.0}, opts),
                       Contains("not numeric"), std::invalid_argument);
}

TEST_CASE("explicit bath converges to the reduced prediction as modes are added") {
  // Deterministic variant of the ensemble comparison: starting every
  // oscillator exactly at its center makes the micro trajectory the ensemble
  // mean of the linear system, so the only gap to the reduced prediction is
  // the frequency discretization. It must shrink as the mode count grows.
  // The density is linear in omega, so the two-row table is interpolated
  // exactly: bath nodes and reference quadrature then sample the same
  // function and the only gap left is the node count. h and dt sit well
  // below the mode-count errors probed here; the integrator floor is ~5e-7.
  const double x0 = 0.5, v0 = 2.0, t_max = 2.0, h = 0.0005, dt = 0.0005;
  Array tw(2), tg(2);
  tw << 0.5, 20.0;
  tg << 2e-4 * (21.0 - 0.5), 2e-4 * (21.0 - 20.0);
  SpectralModel model = SpectralModel::tabulated(tw, tg);
  model.quadrature_points = 20000;  // reference kernel far denser than any bath
  const KernelTable k = memory_kernel(model, h, t_max);
  const GreenTable g = solve_green(k, 1.0, h, t_max);
  const MomentSeries ref =
      classical_mean(g, {x0, v0, 0.0}, ForceSpec::zero(), 1.0);

  const long steps = std::llround(t_max / dt);
  double prev = 0.0;
  double first = 0.0, last = 0.0;
  for (const int N : {125, 250, 500, 1000}) {
    const BathModes md = discretize_bath(model, N);
    FullSystemState st;
    st.x = x0;
    st.xdot = v0;
    st.bath.omegas = md.omegas;
    st.bath.weights = md.weights;
    st.bath.m = 1.0;
    st.bath.q = Array::Constant(N, x0);
    st.bath.qdot = Array::Zero(N);
    const Trajectory tr =
        integrate_full_system(st, ForceSpec::zero(), dt, steps, 200);

    double err = 0.0;
    for (long j = 0; j < tr.t.size(); ++j)
      err = std::max(err, std::abs(tr.x[j] - ref.at_time(tr.t[j])));
    CAPTURE(N);
    CAPTURE(err);
    if (N > 125) CHECK(err < prev);
    prev = err;
    if (N == 125) first = err;
    if (N == 1000) last = err;
  }
  CHECK(first / last > 4.0);
}

}  // TEST_SUITE
