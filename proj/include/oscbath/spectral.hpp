// spectral.hpp -- bath spectral densities and the kernels built from them.
#pragma once

#include <Eigen/Dense>
#include <string>

namespace oscbath {

using Array = Eigen::ArrayXd;

enum class SpectralKind { White, Lorentzian, Tabulated };

// Frequency distribution of the oscillator environment plus the physical
// constants of the coupled system. All quantities are dimensionless numbers
// in natural units; the conventional defaults are M = m = gamma = 1.
struct SpectralModel {
  SpectralKind kind = SpectralKind::White;
  double M = 1.0;      // central-particle mass
  double m = 1.0;      // oscillator mass
  double gamma = 1.0;  // friction coefficient (coupling scale for Tabulated)
  double tau_L = 1.0;  // correlation time, Lorentzian only
  double omega_cut = 100.0;  // high-frequency cutoff
  double omega_min = 0.0;    // low-frequency cutoff; 0 selects 1e-3 * omega_cut
  Array table_omega;         // Tabulated: frequencies, strictly increasing
  Array table_g;             // Tabulated: density samples, >= 0
  int quadrature_points = 0; // frequency-grid size; 0 selects automatic

  static SpectralModel white(double M, double m, double gamma, double omega_cut,
                             double omega_min = 0.0);
  static SpectralModel lorentzian(double M, double m, double gamma, double tau_L,
                                  double omega_cut, double omega_min = 0.0);
  // A one-row table is a discrete spectral line of measure weight g;
  // two or more rows are a sampled continuous density.
  static SpectralModel tabulated(Array omega, Array g, double M = 1.0,
                                 double m = 1.0, double coupling_scale = 1.0);

  double density(double omega) const;  // linear interpolation for Tabulated
  bool is_discrete_line() const;
  double low_cut() const;  // omega_min with the documented default applied
  void validate() const;   // throws std::invalid_argument
};

enum class KernelKind { Memory, Quantum };

// Friction kernel or its finite-temperature quantum counterpart: an optional
// delta-impulse weight plus a smooth part tabulated on a uniform tau-grid.
struct KernelTable {
  KernelKind kind = KernelKind::Memory;
  double impulse_weight = 0.0;
  double grid_step = 0.0;
  Array values;
  double beta = 0.0;  // Quantum only
  double hbar = 0.0;  // Quantum only

  int size() const { return static_cast<int>(values.size()); }
  double tau_max() const { return grid_step * (size() - 1); }
  bool pure_impulse() const;  // no smooth part (delta-correlated noise)
  void validate() const;
};

// Frequency-grid size the band quadrature would pick on its own: at least 8
// points per cosine oscillation across the band at the largest lag requested.
int default_quadrature_points(const SpectralModel& model, double tau_max);

// K(tau) = integral of G(omega) m omega^2 cos(omega tau) over the band.
// White noise is returned as the exact impulse 2*M*gamma*delta(tau); the
// Lorentzian band integrates to the exponential 2*M*gamma/tau_L*exp(-tau/tau_L).
KernelTable memory_kernel(const SpectralModel& model, double grid_step, double tau_max);

// alpha(tau) = integral of G(omega) (1/2) m hbar omega^3 coth(beta hbar omega/2)
// cos(omega tau). For white noise the high-temperature impulse form
// (2*M*gamma/beta) delta(tau) is returned; beta*hbar*omega_cut << 1 is assumed there.
KernelTable quantum_kernel(const SpectralModel& model, double beta, double hbar,
                           double grid_step, double tau_max);

// One-sided cosine transform of K(tau)/beta at a single frequency. The impulse
// sits on the integration boundary and counts half. omega = 0 is allowed and
// gives the plain kernel integral; any other omega must lie inside the band
// resolvable by the table, 1/tau_max < omega < pi/grid_step.
double power_spectrum(const KernelTable& kernel, double beta, double omega);

void write_kernel_csv(const KernelTable& kernel, const std::string& path);
KernelTable read_kernel_csv(const std::string& path);

}  // namespace oscbath
