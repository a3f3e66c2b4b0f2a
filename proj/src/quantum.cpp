#include "oscbath/quantum.hpp"

#include <cmath>
#include <stdexcept>

namespace oscbath {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void require_on_green_grid(const GreenTable& green, const KernelTable& kernel,
                           const std::string& who) {
  require(std::abs(kernel.grid_step - green.grid_step) <= 1e-12 * green.grid_step,
          who + ": kernel grid_step differs from the green grid");
  require(kernel.size() >= green.size(), who + ": kernel table shorter than the green table");
}

// gamma*tau - 3/2 + 2 exp(-gamma*tau) - exp(-2*gamma*tau)/2, the growing part
// of the delta-correlated spread. Series below s = 1e-2 avoids cancellation.
double spread_bracket(double s) {
  if (s < 1e-2) return s * s * s * (1.0 / 3.0 - s / 4.0 + 7.0 * s * s / 60.0);
  return s - 1.5 + 2.0 * std::exp(-s) - 0.5 * std::exp(-2.0 * s);
}

}  // namespace

void WavePacket::validate() const {
  require(M > 0.0, "wave packet: M must be > 0");
  require(sigma0 > 0.0, "wave packet: sigma0 must be > 0");
  require(hbar > 0.0, "wave packet: hbar must be > 0");
}

Array epsilon_series(const GreenTable& green, const KernelTable& alpha) {
  require(alpha.kind == KernelKind::Quantum, "epsilon: alpha must be a quantum kernel");
  require_on_green_grid(green, alpha, "epsilon");
  return kernel_quadratic_form(green, alpha);
}

double epsilon(const GreenTable& green, const KernelTable& alpha, double tau) {
  const Array s = epsilon_series(green, alpha);
  const long k = static_cast<long>(std::llround(tau / green.grid_step));
  require(k >= 0 && k < s.size(), "epsilon: tau outside the tabulated range");
  return s[k];
}

MomentSeries mean_position_series(const QuantumScenario& scenario) {
  scenario.packet.validate();
  const WavePacket& p = scenario.packet;
  const ClassicalInit init{p.x0, p.v0, p.sigma0};

  MomentSeries out;
  if (scenario.mode == InitMode::Correlated) {
    // The correlated mean is the classical one; quantum spreading of the
    // packet never feeds back into a linear mean.
    out = classical_mean(scenario.green, init, scenario.f, p.M);
  } else {
    require(scenario.memory.has_value(),
            "mean_position: uncorrelated mode needs the memory kernel");
    const KernelTable& K = *scenario.memory;
    require(K.kind == KernelKind::Memory, "mean_position: memory kernel expected");
    require_on_green_grid(scenario.green, K, "mean_position");

    const GreenTable& g = scenario.green;
    const long n = g.size();
    const double h = g.grid_step;
    // Switching off the initial correlations injects the transient
    // -K(t) * x0 into the drive; its impulse part is a momentum kick.
    Array drive(n);
    for (long k = 0; k < n; ++k)
      drive[k] = scenario.f(h * k) - K.values[k] * p.x0;
    out.grid_step = h;
    out.quantity = Quantity::Mean;
    out.values = p.x0 + p.v0 * g.Delta + convolve_response(g.Delta, drive, h) / p.M;
    out.values -= (0.5 * K.impulse_weight * p.x0 / p.M) * g.Delta;
  }
  out.mode = scenario.mode;
  return out;
}

double mean_position(const QuantumScenario& scenario, double tau) {
  return mean_position_series(scenario).at_time(tau);
}

MomentSeries mean_square_displacement_series(const QuantumScenario& scenario) {
  scenario.packet.validate();
  require(scenario.beta > 0.0, "mean_square_displacement: beta must be > 0");
  const WavePacket& p = scenario.packet;
  const GreenTable& g = scenario.green;

  MomentSeries out;
  out.quantity = Quantity::Msd;
  out.mode = scenario.mode;
  out.grid_step = g.grid_step;

  if (scenario.mode == InitMode::Correlated) {
    const Array eps = epsilon_series(g, scenario.alpha);
    const Array quantum_term = (p.hbar / (2.0 * p.M * p.sigma0)) * g.Delta;
    out.values = p.sigma0 * p.sigma0 + quantum_term.square() + eps / (p.M * p.M);
    return out;
  }

  const bool white = !scenario.memory || scenario.memory->pure_impulse();
  require(white,
          "mean_square_displacement: uncorrelated spread needs delta-correlated noise");
  require(scenario.gamma >= 0.0, "mean_square_displacement: gamma must be >= 0");

  const long n = g.size();
  const double h = g.grid_step;
  const double gm = scenario.gamma;
  out.values.resize(n);
  for (long k = 0; k < n; ++k) {
    const double tau = h * k;
    const double decay = std::exp(-gm * tau);
    // -expm1 keeps (1 - exp(-gm*tau))/gm stable for small rates.
    const double rise = gm > 0.0 ? -std::expm1(-gm * tau) / gm : tau;
    const double quantum_term = p.hbar * rise / (2.0 * p.M * p.sigma0);
    const double thermal = gm > 0.0
        ? 2.0 / (p.M * scenario.beta * gm * gm) * spread_bracket(gm * tau)
        : 0.0;
    out.values[k] = p.sigma0 * p.sigma0 * decay * decay +
                    quantum_term * quantum_term + thermal;
  }
  return out;
}

double mean_square_displacement(const QuantumScenario& scenario, double tau) {
  return mean_square_displacement_series(scenario).at_time(tau);
}

Kick spurious_kick(double M, double gamma, double x0, double v0) {
  if (M <= 0.0) throw std::invalid_argument("spurious_kick: M must be > 0");
  Kick k;
  k.delta_p = -M * gamma * x0;
  k.v0_eff = v0 + k.delta_p / M;
  return k;
}

}  // namespace oscbath
