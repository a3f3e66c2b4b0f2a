// gle.hpp -- reduced dynamics: the relaxation function of the memory equation
// and the first two moments of the particle built on top of it.
#pragma once

#include <optional>
#include <string>

#include "oscbath/bath.hpp"
#include "oscbath/forces.hpp"
#include "oscbath/spectral.hpp"

namespace oscbath {

// Relaxation function I(tau) of the homogeneous memory equation
//   M dI/dtau + int_0^tau K(sigma) I(tau - sigma) dsigma = 0,  I(0) = 1,
// together with its running integral Delta and derivative. Delta is the
// position response to a unit initial velocity.
struct GreenTable {
  double grid_step = 0.0;
  Array I;
  Array Delta;
  Array Idot;

  int size() const { return static_cast<int>(I.size()); }
  double tau_max() const { return grid_step * (size() - 1); }
};

// Implicit product-trapezoid march. The kernel must be sampled on the same
// step h that the solver uses; a delta impulse in the kernel contributes
// (impulse_weight/2) * I(tau) exactly, its boundary half. Throws
// std::runtime_error if |I| exceeds 1e3, which signals a non-dissipative or
// unstable kernel.
GreenTable solve_green(const KernelTable& kernel, double M, double h, double tau_max);

// min(relaxation_time/200, tau_max/2000) with relaxation_time = 1/gamma;
// gamma <= 0 falls back to tau_max/2000.
double default_green_step(double gamma, double tau_max);

struct ClassicalInit {
  double x0 = 0.0;
  double v0 = 0.0;
  double sigma0 = 0.0;  // initial position spread, enters the msd floor
};

enum class Quantity { Mean, Msd };

// A moment of the reduced dynamics on the uniform grid tau_k = k * grid_step.
struct MomentSeries {
  std::string scenario_id;
  Quantity quantity = Quantity::Mean;
  std::optional<InitMode> mode;  // stamped by the quantum pipelines
  double grid_step = 0.0;
  Array values;

  int size() const { return static_cast<int>(values.size()); }
  double at_time(double tau) const;  // value at the nearest grid point
};

// <x(t)> = x0 + v0 Delta(t) + (1/M) int_0^t Delta(t-s) f(s) ds.
MomentSeries classical_mean(const GreenTable& green, const ClassicalInit& init,
                            const ForceSpec& f, double M);

// <(x - <x>)^2>(t) = sigma0^2 + S(t)/(M^2 beta) with S the double convolution
// of Delta against the kernel. Kernel and green table must share the grid.
MomentSeries classical_msd(const GreenTable& green, const KernelTable& kernel,
                           const ClassicalInit& init, double M, double beta);

// One stochastic trajectory of the reduced equation driven by the force
// synthesized from an explicit bath draw plus the external bias.
Trajectory classical_trajectory(const GreenTable& green, const BathRealization& bath,
                                const ClassicalInit& init, const ForceSpec& f,
                                double M);

// ---- building blocks shared with the quantum pipelines ----

// Trapezoid convolution h * sum resp(tau_k - s) g(s) on the common grid.
Array convolve_response(const Array& resp, const Array& g, double h);

// Cumulative trapezoid of g.
Array cumtrapz(const Array& g, double h);

// S(t) = int_0^t int_0^t Delta(s) kappa(|s-u|) Delta(u) ds du, with a kernel
// impulse c delta(s-u) contributing c * int Delta^2 exactly.
Array kernel_quadratic_form(const GreenTable& green, const KernelTable& kernel);

void write_moment_csv(const MomentSeries& series, const std::string& path);
void write_green_csv(const GreenTable& green, const std::string& path);

}  // namespace oscbath
