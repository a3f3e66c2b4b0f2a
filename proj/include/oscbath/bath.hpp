// bath.hpp -- explicit N-oscillator environments: discretization, thermal
// sampling, the synthesized random force, and direct integration of the full
// coupled system.
#pragma once

#include <cstdint>
#include <string>

#include "oscbath/forces.hpp"
#include "oscbath/spectral.hpp"

namespace oscbath {

// Correlated: oscillators equilibrated around the initial particle position.
// Uncorrelated: equilibrated around the origin regardless of x0.
enum class InitMode { Correlated, Uncorrelated };

// Translated couples through (q - x)^2 and is invariant under a joint shift
// of particle and bath. Bilinear couples through q*x and is not.
enum class LagrangianForm { Translated, Bilinear };

struct BathModes {
  Array omegas;
  Array weights;  // measure weights w_n; effective oscillator mass is m * w_n
};

// Uniform frequency nodes over [omega_min, omega_cut] carrying trapezoid
// measure weights G(omega_n) * d_omega. N = 1 degenerates to a single midpoint
// node holding the whole band mass.
BathModes discretize_bath(const SpectralModel& model, int N);

// One sampled microstate of the N-oscillator environment.
struct BathRealization {
  Array omegas;
  Array weights;
  double m = 1.0;
  Array q;
  Array qdot;
  InitMode init_mode = InitMode::Correlated;
  std::uint64_t seed = 0;

  int size() const { return static_cast<int>(omegas.size()); }
};

// Draws positions around the mode center (x0 for Correlated, 0 for
// Uncorrelated) with variance 1/(beta * m * w_n * omega_n^2) and velocities
// around 0 with variance 1/(beta * m * w_n). Zero-weight oscillators are
// inert: they sit exactly at the center and consume no randomness.
BathRealization sample_thermal(const BathModes& modes, double m, double beta,
                               double x0, InitMode mode, std::uint64_t seed);

// Random force on the particle synthesized from a bath draw. In Uncorrelated
// mode the deterministic transient -K(t - t0) * x0 is reported separately in
// delta_f; the physical force is always r + delta_f. The velocity offset
// follows the qdot - v0 convention of the force decomposition, so synthesized
// trajectories are exact only for v0 = 0.
struct ForceSample {
  double r = 0.0;
  double delta_f = 0.0;
  double total() const { return r + delta_f; }
};

ForceSample random_force(const BathRealization& bath, double x0, double v0,
                         double t0, double t);

struct ForceSeries {
  Array r;
  Array delta_f;
};

// Same decomposition on a whole time grid; one rotation recurrence per
// oscillator instead of per-sample trigonometry.
ForceSeries random_force_series(const BathRealization& bath, double x0, double v0,
                                double t0, const Array& t);

struct Trajectory {
  Array t;
  Array x;
  Array xdot;
};

struct FullSystemState {
  double x = 0.0;
  double xdot = 0.0;
  double M = 1.0;
  BathRealization bath;
  double t = 0.0;
  LagrangianForm lagrangian = LagrangianForm::Translated;
};

// Velocity-Verlet integration of the particle plus all explicit oscillators
// under the chosen coupling form and external bias. Records every
// record_stride-th step (state at step 0 included). Throws std::runtime_error
// if the state stops being finite.
Trajectory integrate_full_system(const FullSystemState& state, const ForceSpec& force,
                                 double dt, long steps, long record_stride = 1);

// Total energy of the translated form; conserved for f = 0.
double full_system_energy(const FullSystemState& state);

void write_trajectory_csv(const Trajectory& traj, const std::string& path);

}  // namespace oscbath
