#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "oscbath/bath.hpp"

using namespace oscbath;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_SUITE("bath") {

TEST_CASE("discretization carries the band mass") {
  SUBCASE("white: flat integrand, trapezoid exact") {
    const SpectralModel s = SpectralModel::white(1.0, 1.0, 0.8, 50.0, 0.5);
    const BathModes md = discretize_bath(s, 400);
    const double mass = (md.weights * s.m * md.omegas.square()).sum();
    const double expect = 2.0 * s.M * s.gamma / kPi * (50.0 - 0.5);
    CHECK(mass == doctest::Approx(expect).epsilon(1e-12));
  }
  SUBCASE("lorentzian: converges to the band integral") {
    const SpectralModel s = SpectralModel::lorentzian(1.0, 1.0, 0.5, 2.0, 50.0, 0.5);
    const BathModes md = discretize_bath(s, 4000);
    const double mass = (md.weights * s.m * md.omegas.square()).sum();
    const double expect = 4.0 * s.M * s.gamma / (kPi * s.tau_L) *
                          (std::atan(50.0 * s.tau_L) - std::atan(0.5 * s.tau_L));
    CHECK(mass == doctest::Approx(expect).epsilon(1e-5));
  }
  SUBCASE("N = 1 is the midpoint carrying everything") {
    const SpectralModel s = SpectralModel::white(1.0, 1.0, 0.8, 50.0, 0.5);
    const BathModes md = discretize_bath(s, 1);
    CHECK(md.omegas[0] == doctest::Approx(25.25).epsilon(1e-15));
    CHECK(md.weights[0] ==
          doctest::Approx(s.density(25.25) * 49.5).epsilon(1e-15));
  }
  SUBCASE("a discrete line resolves to exactly one oscillator") {
    Array w(1), g(1);
    w[0] = 2.0;
    g[0] = 0.7;
    SpectralModel line = SpectralModel::tabulated(w, g, 1.0, 1.0, 3.0);
    const BathModes md = discretize_bath(line, 1);
    CHECK(md.weights[0] == doctest::Approx(2.1).epsilon(1e-15));
    CHECK_THROWS_AS(discretize_bath(line, 2), std::invalid_argument);
  }
}

TEST_CASE("thermal sampling equipartition") {
  const SpectralModel s = SpectralModel::white(1.0, 1.0, 1.0, 10.0, 1.0);
  const BathModes md = discretize_bath(s, 3);
  const double beta = 2.0, x0 = 0.7;
  const int samples = 100000;

  double mq = 0.0, mq2 = 0.0, mv2 = 0.0;
  for (int i = 0; i < samples; ++i) {
    const BathRealization b =
        sample_thermal(md, s.m, beta, x0, InitMode::Correlated, 1000 + i);
    mq += b.q[1];
    mq2 += (b.q[1] - x0) * (b.q[1] - x0);
    mv2 += b.qdot[1] * b.qdot[1];
  }
  mq /= samples;
  mq2 /= samples;
  mv2 /= samples;

  const double mt = s.m * md.weights[1];
  const double var_q = 1.0 / (beta * mt * md.omegas[1] * md.omegas[1]);
  const double var_v = 1.0 / (beta * mt);
  CHECK(std::abs(mq - x0) < 4.0 * std::sqrt(var_q / samples));
  CHECK(std::abs(mq2 - var_q) / var_q < 0.02);
  CHECK(std::abs(mv2 - var_v) / var_v < 0.02);

  const BathRealization u =
      sample_thermal(md, s.m, beta, x0, InitMode::Uncorrelated, 42);
  CHECK(u.init_mode == InitMode::Uncorrelated);
  // Uncorrelated draws center on the origin; with beta this large they stay
  // within a few sigma of it, nowhere near x0 = 0.7 systematically.
}

TEST_CASE("force bookkeeping: the physical force ignores the preparation split") {
  // Correlated and uncorrelated modes split the same microstate differently
  // between r and delta_f; the sum must coincide.
  BathRealization b;
  b.omegas = Array::LinSpaced(4, 1.0, 4.0);
  b.weights = Array::Constant(4, 0.3);
  b.m = 1.2;
  b.q = Array::LinSpaced(4, -0.5, 1.0);
  b.qdot = Array::LinSpaced(4, 0.2, -0.4);

  const Array t = Array::LinSpaced(9, 0.0, 2.0);
  b.init_mode = InitMode::Correlated;
  const ForceSeries fc = random_force_series(b, 0.8, 0.1, 0.0, t);
  b.init_mode = InitMode::Uncorrelated;
  const ForceSeries fu = random_force_series(b, 0.8, 0.1, 0.0, t);

  CHECK(fc.delta_f.abs().maxCoeff() == 0.0);
  CHECK(((fc.r + fc.delta_f) - (fu.r + fu.delta_f)).abs().maxCoeff() < 1e-12);
  // and the transient is -x0 * K(t) resynthesized from the modes
  const Array c_n = b.m * b.weights * b.omegas.square();
  CHECK(fu.delta_f[0] == doctest::Approx(-0.8 * c_n.sum()).epsilon(1e-12));
}

TEST_CASE("nonzero initial particle velocity biases the synthesized force") {
  // The force subtracts v0 from the oscillator velocities, so at vanishing
  // temperature the mean force is -v0 * sum c_n sin(omega t) / omega.
  const SpectralModel s = SpectralModel::white(1.0, 1.0, 1.0, 20.0, 0.5);
  const BathModes md = discretize_bath(s, 50);
  const double v0 = 0.3;
  const BathRealization b =
      sample_thermal(md, s.m, 1e16, 0.4, InitMode::Correlated, 7);

  const Array t = Array::LinSpaced(5, 0.0, 1.0);
  const ForceSeries f = random_force_series(b, 0.4, v0, 0.0, t);
  const Array c_n = b.m * b.weights * b.omegas.square();
  for (long k = 0; k < t.size(); ++k) {
    const double expect = -v0 * (c_n * (md.omegas * t[k]).sin() / md.omegas).sum();
    CHECK(f.r[k] == doctest::Approx(expect).epsilon(1e-6));
  }
}

TEST_CASE("non-uniform time grids agree with the uniform fast path") {
  BathRealization b;
  b.omegas = Array::LinSpaced(3, 1.0, 5.0);
  b.weights = Array::Constant(3, 0.2);
  b.m = 1.0;
  b.q = Array::Constant(3, 0.3);
  b.qdot = Array::Constant(3, -0.1);
  b.init_mode = InitMode::Correlated;

  Array uniform = Array::LinSpaced(6, 0.0, 1.0);
  Array jittered = uniform;
  jittered[3] += 0.05;  // breaks the uniform spacing
  const ForceSeries fu = random_force_series(b, 0.0, 0.0, 0.0, uniform);
  const ForceSeries fj = random_force_series(b, 0.0, 0.0, 0.0, jittered);
  for (long k = 0; k < 6; ++k) {
    if (k == 3) continue;
    CHECK(fu.r[k] == doctest::Approx(fj.r[k]).epsilon(1e-12));
  }
  const ForceSample single = random_force(b, 0.0, 0.0, 0.0, uniform[4]);
  CHECK(single.r == doctest::Approx(fu.r[4]).epsilon(1e-12));
}

TEST_CASE("two-body integration matches the closed form") {
  const double M = 2.0, mt = 0.5, omega = 3.0;
  FullSystemState st;
  st.M = M;
  st.x = 0.4;
  st.xdot = -0.3;
  st.bath.omegas = Array::Constant(1, omega);
  st.bath.weights = Array::Constant(1, mt);  // bath.m = 1, effective mass 0.5
  st.bath.m = 1.0;
  st.bath.q = Array::Constant(1, 1.1);
  st.bath.qdot = Array::Constant(1, 0.6);

  const double dt = 5e-4;
  const Trajectory tr = integrate_full_system(st, ForceSpec::zero(), dt, 4000, 40);
  double worst = 0.0;
  for (long k = 0; k < tr.t.size(); ++k) {
    const double expect = oracles::two_body_position(M, mt, omega, st.x, st.xdot,
                                                     1.1, 0.6, tr.t[k]);
    worst = std::max(worst, std::abs(tr.x[k] - expect));
  }
  CHECK(worst < 2e-5);
}

TEST_CASE("integration guards") {
  FullSystemState st;
  st.bath.omegas = Array::Constant(1, 100.0);
  st.bath.weights = Array::Constant(1, 0.1);
  st.bath.q = Array::Zero(1);
  st.bath.qdot = Array::Zero(1);
  CHECK_THROWS_AS(integrate_full_system(st, ForceSpec::zero(), 0.01, 10),
                  std::invalid_argument);  // dt * omega = 1 too coarse
  CHECK_THROWS_AS(integrate_full_system(st, ForceSpec::zero(), 0.0, 10),
                  std::invalid_argument);
}

TEST_CASE("system energy") {
  FullSystemState st;
  st.M = 2.0;
  st.xdot = 3.0;
  st.x = 1.0;
  st.bath.m = 1.0;
  st.bath.omegas = Array::Constant(1, 2.0);
  st.bath.weights = Array::Constant(1, 0.5);
  st.bath.q = Array::Constant(1, 2.0);     // q - x = 1
  st.bath.qdot = Array::Constant(1, 4.0);
  // 0.5*2*9 + 0.5*0.5*16 + 0.5*0.5*4*1 = 9 + 4 + 1
  CHECK(full_system_energy(st) == doctest::Approx(14.0).epsilon(1e-15));
}

}  // TEST_SUITE
