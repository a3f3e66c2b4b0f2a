// quantum.hpp -- moments of a Gaussian wave packet coupled to the thermal
// environment, in both bath preparations.
#pragma once

#include <optional>

#include "oscbath/gle.hpp"

namespace oscbath {

// Minimum-uncertainty Gaussian packet: sharp mean position x0 and velocity
// v0, position spread sigma0.
struct WavePacket {
  double x0 = 0.0;
  double v0 = 0.0;
  double sigma0 = 1.0;
  double hbar = 1.0;
  double M = 1.0;

  void validate() const;
};

// Everything the quantum pipelines need. The memory kernel is optional: it is
// only consulted for the mean in Uncorrelated mode, where the preparation
// transient -K(t)*x0 enters the drive. gamma feeds the delta-correlated
// closed forms (spread in Uncorrelated mode).
struct QuantumScenario {
  WavePacket packet;
  GreenTable green;
  KernelTable alpha;                   // Quantum kind, on the green grid
  std::optional<KernelTable> memory;   // Memory kind, on the green grid
  ForceSpec f;
  InitMode mode = InitMode::Correlated;
  double beta = 1.0;
  double gamma = 0.0;
};

// eps(t) = int_0^t int_0^t Delta(s) alpha(|s-u|) Delta(u) ds du, the thermal
// part of the packet spread. An impulse alpha contributes exactly.
Array epsilon_series(const GreenTable& green, const KernelTable& alpha);
double epsilon(const GreenTable& green, const KernelTable& alpha, double tau);

// Mean position. Correlated preparation reproduces the classical mean of the
// same packet; Uncorrelated adds the preparation transient.
MomentSeries mean_position_series(const QuantumScenario& scenario);
double mean_position(const QuantumScenario& scenario, double tau);

// Packet spread about the mean:
//   sigma^2(t) = sigma0^2 + (hbar Delta / (2 M sigma0))^2 + eps/M^2
// in Correlated mode. Uncorrelated mode is available for delta-correlated
// noise only, through its closed form in gamma.
MomentSeries mean_square_displacement_series(const QuantumScenario& scenario);
double mean_square_displacement(const QuantumScenario& scenario, double tau);

// Momentum impulse delivered by switching off the preparation correlations:
// delta_p = -M*gamma*x0. Folding v0_eff = v0 + delta_p/M into the correlated
// mean reproduces the uncorrelated one for delta-correlated noise.
struct Kick {
  double delta_p = 0.0;
  double v0_eff = 0.0;
};

Kick spurious_kick(double M, double gamma, double x0, double v0);

}  // namespace oscbath
