#include <doctest.h>

#include <cmath>

#include "oscbath/quantum.hpp"

using namespace oscbath;

namespace {

struct WhiteSetup {
  SpectralModel model;
  KernelTable kernel;
  KernelTable alpha;
  GreenTable green;
};

WhiteSetup make_white(double M, double gamma, double beta, double hbar,
                      double h, double t_max) {
  WhiteSetup s;
  s.model = SpectralModel::white(M, 1.0, gamma, 200.0);
  s.kernel = memory_kernel(s.model, h, t_max);
  s.alpha = quantum_kernel(s.model, beta, hbar, h, t_max);
  s.green = solve_green(s.kernel, M, h, t_max);
  return s;
}

}  // namespace

TEST_SUITE("quantum") {

TEST_CASE("packet spread in the delta-correlated bath") {
  const double h = 0.005, t_max = 10.0;
  const WhiteSetup s = make_white(1.0, 1.0, 1.0, 1.0, h, t_max);

  QuantumScenario q;
  q.packet = {0.0, 0.0, 1.0, 1.0, 1.0};
  q.green = s.green;
  q.alpha = s.alpha;
  q.memory = s.kernel;
  q.beta = 1.0;
  q.gamma = 1.0;

  // sigma0^2 + (Delta/2)^2 + 2*bracket(tau) at unit constants, tau = 1
  CHECK(mean_square_displacement(q, 1.0) ==
        doctest::Approx(1.4360765823707761).epsilon(1e-5));

  // thermal part of the correlated spread equals the classical one: the
  // quantum kernel of white noise is exactly K/beta
  const MomentSeries qm = mean_square_displacement_series(q);
  const MomentSeries cm =
      classical_msd(s.green, s.kernel, {0.0, 0.0, 1.0}, 1.0, 1.0);
  const Array quantum_term = (0.5 * s.green.Delta).square();
  const Array lhs = qm.values - 1.0 - quantum_term;
  const Array rhs = cm.values - 1.0;
  for (long k = 1; k < qm.size(); ++k)
    CHECK(lhs[k] == doctest::Approx(rhs[k]).epsilon(1e-12));
}

TEST_CASE("releasing the initial correlations costs the packet its floor") {
  const double h = 0.005, t_max = 10.0, sigma0 = 0.8;
  const WhiteSetup s = make_white(1.0, 1.0, 1.0, 1.0, h, t_max);

  QuantumScenario q;
  q.packet = {0.0, 0.0, sigma0, 1.0, 1.0};
  q.green = s.green;
  q.alpha = s.alpha;
  q.memory = s.kernel;
  q.beta = 1.0;
  q.gamma = 1.0;

  const MomentSeries corr = mean_square_displacement_series(q);
  q.mode = InitMode::Uncorrelated;
  const MomentSeries unc = mean_square_displacement_series(q);

  // identical thermal and quantum parts; only the sigma0 floor decays
  for (double tau : {0.5, 1.0, 2.0, 5.0}) {
    const double expect = sigma0 * sigma0 * -std::expm1(-2.0 * tau);
    CHECK(corr.at_time(tau) - unc.at_time(tau) ==
          doctest::Approx(expect).epsilon(1e-3));
  }
}

TEST_CASE("free packet spreading") {
  // gamma = 0: no bath left, the uncorrelated closed form must reduce to
  // ballistic wave-packet spreading.
  const double M = 1.3, hbar = 0.7, sigma0 = 0.6, h = 0.01, t_max = 4.0;
  const WhiteSetup s = make_white(M, 0.0, 2.0, hbar, h, t_max);

  QuantumScenario q;
  q.packet = {0.5, 0.0, sigma0, hbar, M};
  q.green = s.green;
  q.alpha = s.alpha;
  q.memory = s.kernel;
  q.mode = InitMode::Uncorrelated;
  q.beta = 2.0;
  q.gamma = 0.0;

  const double tau = 2.0;
  const double ballistic = hbar * tau / (2.0 * M * sigma0);
  CHECK(mean_square_displacement(q, tau) ==
        doctest::Approx(sigma0 * sigma0 + ballistic * ballistic).epsilon(1e-12));
}

TEST_CASE("small-time growth of the thermal spread") {
  // Impulse noise starts the spread as tau^3; a smooth kernel as tau^4.
  const double h = 1e-4, t_max = 0.01;

  const WhiteSetup w = make_white(1.0, 1.0, 1.0, 1.0, h, t_max);
  const Array eps_w = epsilon_series(w.green, w.alpha);
  const long k1 = 20, k2 = 40;  // tau = 2e-3 and 4e-3
  CHECK(eps_w[k1] / eps_w[k2] == doctest::Approx(1.0 / 8.0).epsilon(0.02));

  Array lw(1), lg(1);
  lw[0] = 1.0;
  lg[0] = 0.5;
  const SpectralModel line = SpectralModel::tabulated(lw, lg);
  const KernelTable lk = memory_kernel(line, h, t_max);
  const KernelTable la = quantum_kernel(line, 2.0, 1.0, h, t_max);
  const GreenTable green = solve_green(lk, 1.0, h, t_max);
  const Array eps_l = epsilon_series(green, la);
  CHECK(eps_l[k1] / eps_l[k2] == doctest::Approx(1.0 / 16.0).epsilon(0.03));
}

TEST_CASE("uncorrelated mean equals the correlated mean after the kick") {
  const double M = 2.0, gamma = 0.5, x0 = 3.0, v0 = 1.0;
  const double h = 0.002, t_max = 8.0;
  const WhiteSetup s = make_white(M, gamma, 1.0, 1.0, h, t_max);

  const Kick kick = spurious_kick(M, gamma, x0, v0);
  CHECK(kick.delta_p == doctest::Approx(-3.0).epsilon(1e-15));
  CHECK(kick.v0_eff == doctest::Approx(-0.5).epsilon(1e-15));

  QuantumScenario q;
  q.packet = {x0, v0, 1.0, 1.0, M};
  q.green = s.green;
  q.alpha = s.alpha;
  q.memory = s.kernel;
  q.mode = InitMode::Uncorrelated;
  q.gamma = gamma;

  const MomentSeries unc = mean_position_series(q);
  const MomentSeries kicked =
      classical_mean(s.green, {x0, kick.v0_eff, 0.0}, ForceSpec::zero(), M);
  CHECK((unc.values - kicked.values).abs().maxCoeff() < 1e-12 * x0);

  // correlated mode never sees the transient
  q.mode = InitMode::Correlated;
  const MomentSeries corr = mean_position_series(q);
  const MomentSeries plain =
      classical_mean(s.green, {x0, v0, 0.0}, ForceSpec::zero(), M);
  CHECK((corr.values - plain.values).abs().maxCoeff() == 0.0);
  CHECK(corr.mode == InitMode::Correlated);
}

TEST_CASE("guards") {
  const double h = 0.01, t_max = 1.0;
  const WhiteSetup s = make_white(1.0, 1.0, 1.0, 1.0, h, t_max);

  QuantumScenario q;
  q.packet = {0.0, 0.0, 1.0, 1.0, 1.0};
  q.green = s.green;
  q.alpha = s.alpha;
  q.memory = s.kernel;
  q.gamma = 1.0;

  SUBCASE("packet validation") {
    q.packet.sigma0 = 0.0;
    CHECK_THROWS_AS(mean_square_displacement_series(q), std::invalid_argument);
    q.packet.sigma0 = 1.0;
    q.packet.hbar = -1.0;
    CHECK_THROWS_AS(mean_position_series(q), std::invalid_argument);
  }

  SUBCASE("alpha must be a quantum kernel") {
    CHECK_THROWS_AS(epsilon_series(s.green, s.kernel), std::invalid_argument);
  }

  SUBCASE("alpha must live on the green grid") {
    const KernelTable fine = quantum_kernel(s.model, 1.0, 1.0, h / 2, t_max);
    CHECK_THROWS_AS(epsilon_series(s.green, fine), std::invalid_argument);
  }

  SUBCASE("uncorrelated mean needs the memory kernel") {
    q.mode = InitMode::Uncorrelated;
    q.memory.reset();
    CHECK_THROWS_AS(mean_position_series(q), std::invalid_argument);
  }

  SUBCASE("uncorrelated spread rejects colored noise") {
    const SpectralModel col = SpectralModel::lorentzian(1.0, 1.0, 1.0, 2.0, 100.0);
    q.memory = memory_kernel(col, h, t_max);
    q.green = solve_green(*q.memory, 1.0, h, t_max);
    q.alpha = quantum_kernel(col, 1.0, 1.0, h, t_max);
    q.mode = InitMode::Uncorrelated;
    CHECK_THROWS_AS(mean_square_displacement_series(q), std::invalid_argument);
  }
}

}  // TEST_SUITE
