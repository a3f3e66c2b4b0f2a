// forces.hpp -- external bias on the particle; the potential is V(x,t) = -x f(t).
#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oscbath {

enum class ForceKind { Zero, Constant, Sinusoid, PiecewiseConstant };

struct ForceSpec {
  ForceKind kind = ForceKind::Zero;
  double f0 = 0.0;                           // Constant
  double amplitude = 0.0;                    // Sinusoid: amplitude*cos(omega*t + phase)
  double omega = 0.0;
  double phase = 0.0;
  std::vector<double> breakpoints;           // PiecewiseConstant, strictly increasing
  std::vector<double> values;                // value held on [b_i, b_{i+1}); 0 before b_0

  static ForceSpec zero() { return {}; }

  static ForceSpec constant(double f0) {
    ForceSpec f;
    f.kind = ForceKind::Constant;
    f.f0 = f0;
    return f;
  }

  static ForceSpec sinusoid(double amplitude, double omega, double phase = 0.0) {
    ForceSpec f;
    f.kind = ForceKind::Sinusoid;
    f.amplitude = amplitude;
    f.omega = omega;
    f.phase = phase;
    return f;
  }

  static ForceSpec piecewise(std::vector<double> breakpoints, std::vector<double> values) {
    ForceSpec f;
    f.kind = ForceKind::PiecewiseConstant;
    f.breakpoints = std::move(breakpoints);
    f.values = std::move(values);
    f.validate();
    return f;
  }

  void validate() const {
    if (kind != ForceKind::PiecewiseConstant) return;
    if (breakpoints.empty() || breakpoints.size() != values.size())
      throw std::invalid_argument("force: piecewise breakpoints/values mismatch");
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
      if (!(breakpoints[i] > breakpoints[i - 1]))
        throw std::invalid_argument("force: breakpoints must be strictly increasing");
  }

  double operator()(double t) const {
    switch (kind) {
      case ForceKind::Zero:
        return 0.0;
      case ForceKind::Constant:
        return f0;
      case ForceKind::Sinusoid:
        return amplitude * std::cos(omega * t + phase);
      case ForceKind::PiecewiseConstant: {
        if (t < breakpoints.front()) return 0.0;
        std::size_t i = breakpoints.size() - 1;
        while (i > 0 && t < breakpoints[i]) --i;
        return values[i];
      }
    }
    return 0.0;
  }

  bool is_zero() const { return kind == ForceKind::Zero; }
};

}  // namespace oscbath
