#include "oscbath/gle.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace oscbath {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void require_common_grid(double h_green, long n_green, const KernelTable& kernel,
                         const std::string& who) {
  require(std::abs(kernel.grid_step - h_green) <= 1e-12 * h_green,
          who + ": kernel grid_step differs from the green grid");
  require(kernel.size() >= n_green, who + ": kernel table shorter than the green table");
}

}  // namespace

double default_green_step(double gamma, double tau_max) {
  const double by_grid = tau_max / 2000.0;
  if (gamma <= 0.0) return by_grid;
  return std::min(1.0 / (200.0 * gamma), by_grid);
}

GreenTable solve_green(const KernelTable& kernel, double M, double h, double tau_max) {
  kernel.validate();
  require(M > 0.0, "solve_green: M must be > 0");
  require(h > 0.0, "solve_green: h must be > 0");
  require(std::abs(kernel.grid_step - h) <= 1e-12 * h,
          "solve_green: kernel must be sampled on the solver step");
  const long n = static_cast<long>(std::floor(tau_max / h + 1e-9)) + 1;
  require(n >= 2, "solve_green: tau_max must cover at least one step");
  require(n <= kernel.size(), "solve_green: kernel table shorter than tau_max");

  const double c = kernel.impulse_weight;
  const Array& Ks = kernel.values;

  GreenTable g;
  g.grid_step = h;
  g.I.resize(n);
  g.Idot.resize(n);
  Array C(n);  // smooth-part convolution int_0^tau Ks(sigma) I(tau-sigma) dsigma

  g.I[0] = 1.0;
  C[0] = 0.0;
  g.Idot[0] = -0.5 * c / M;
  const double denom = M / h + 0.25 * c + 0.25 * h * Ks[0];
  for (long k = 1; k < n; ++k) {
    // Trapezoid of the convolution with the sigma = 0 node split off, since
    // that node holds the unknown I_k.
    double part = 0.5 * Ks[k] * g.I[0];
    if (k >= 2)
      part += (Ks.segment(1, k - 1) * g.I.segment(1, k - 1).reverse()).sum();
    const double Ct = h * part;
    g.I[k] = ((M / h - 0.25 * c) * g.I[k - 1] - 0.5 * (Ct + C[k - 1])) / denom;
    C[k] = Ct + 0.5 * h * Ks[0] * g.I[k];
    g.Idot[k] = -(0.5 * c * g.I[k] + C[k]) / M;
    if (std::abs(g.I[k]) > 1e3)
      throw std::runtime_error("solve_green: relaxation function diverged");
  }

  // Plain cumulative trapezoid, deliberately: summing the update rule shows
  // the discrete Delta obeys M(I_n - 1) = -(c/2 + h sum Ks) Delta_n exactly,
  // so the long-horizon asymptote Delta -> 2M/(c + 2 int Ks) carries no
  // quadrature error. An endpoint-corrected rule would break that identity.
  g.Delta.resize(n);
  g.Delta[0] = 0.0;
  double acc = 0.0;
  for (long k = 1; k < n; ++k) {
    acc += 0.5 * h * (g.I[k - 1] + g.I[k]);
    g.Delta[k] = acc;
  }
  return g;
}

// ---- building blocks ---------------------------------------------------------

Array convolve_response(const Array& resp, const Array& g, double h) {
  require(resp.size() == g.size(), "convolve_response: length mismatch");
  const long n = resp.size();
  Array out(n);
  out[0] = 0.0;
  for (long k = 1; k < n; ++k) {
    double acc = 0.5 * (resp[k] * g[0] + resp[0] * g[k]);
    if (k >= 2)
      acc += (resp.segment(1, k - 1).reverse() * g.segment(1, k - 1)).sum();
    out[k] = h * acc;
  }
  return out;
}

Array cumtrapz(const Array& g, double h) {
  Array out(g.size());
  out[0] = 0.0;
  for (long k = 1; k < g.size(); ++k)
    out[k] = out[k - 1] + 0.5 * h * (g[k - 1] + g[k]);
  return out;
}

Array kernel_quadratic_form(const GreenTable& green, const KernelTable& kernel) {
  kernel.validate();
  const long n = green.size();
  require(n >= 2, "kernel_quadratic_form: green table too short");
  require_common_grid(green.grid_step, n, kernel, "kernel_quadratic_form");
  const double h = green.grid_step;

  // Split at the diagonal: S = 2 int_0^t Delta(s) C(s) ds with
  // C(s) = int_0^s kappa(s-u) Delta(u) du, plus the exact impulse part.
  const Array Ks = kernel.values.head(n);
  const Array C = convolve_response(green.Delta, Ks, h);
  Array S = 2.0 * cumtrapz(green.Delta * C, h);
  if (kernel.impulse_weight != 0.0)
    S += kernel.impulse_weight * cumtrapz(green.Delta.square(), h);
  return S;
}

// ---- moments ------------------------------------------------------------------

double MomentSeries::at_time(double tau) const {
  const long k = static_cast<long>(std::llround(tau / grid_step));
  if (k < 0 || k >= size())
    throw std::invalid_argument("moment series: time outside the tabulated range");
  return values[k];
}

MomentSeries classical_mean(const GreenTable& green, const ClassicalInit& init,
                            const ForceSpec& f, double M) {
  require(M > 0.0, "classical_mean: M must be > 0");
  f.validate();
  const long n = green.size();
  MomentSeries s;
  s.quantity = Quantity::Mean;
  s.grid_step = green.grid_step;
  s.values = init.x0 + init.v0 * green.Delta;
  if (!f.is_zero()) {
    Array g(n);
    for (long k = 0; k < n; ++k) g[k] = f(green.grid_step * k);
    s.values += convolve_response(green.Delta, g, green.grid_step) / M;
  }
  return s;
}

MomentSeries classical_msd(const GreenTable& green, const KernelTable& kernel,
                           const ClassicalInit& init, double M, double beta) {
  require(M > 0.0, "classical_msd: M must be > 0");
  require(beta > 0.0, "classical_msd: beta must be > 0");
  require(init.sigma0 >= 0.0, "classical_msd: sigma0 must be >= 0");
  MomentSeries s;
  s.quantity = Quantity::Msd;
  s.grid_step = green.grid_step;
  s.values = init.sigma0 * init.sigma0 +
             kernel_quadratic_form(green, kernel) / (M * M * beta);
  return s;
}

Trajectory classical_trajectory(const GreenTable& green, const BathRealization& bath,
                                const ClassicalInit& init, const ForceSpec& f,
                                double M) {
  require(M > 0.0, "classical_trajectory: M must be > 0");
  f.validate();
  const long n = green.size();
  const double h = green.grid_step;
  Trajectory traj;
  traj.t = Array::LinSpaced(n, 0.0, h * (n - 1));

  const ForceSeries fs = random_force_series(bath, init.x0, init.v0, 0.0, traj.t);
  Array g = fs.r + fs.delta_f;
  if (!f.is_zero())
    for (long k = 0; k < n; ++k) g[k] += f(traj.t[k]);

  traj.x = init.x0 + init.v0 * green.Delta + convolve_response(green.Delta, g, h) / M;
  traj.xdot = init.v0 * green.I + convolve_response(green.I, g, h) / M;
  return traj;
}

// ---- io -----------------------------------------------------------------------

void write_moment_csv(const MomentSeries& series, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  std::string header = "# quantity=";
  header += series.quantity == Quantity::Mean ? "mean" : "msd";
  header += " scenario=" + series.scenario_id;
  if (series.mode)
    header += std::string(" mode=") +
              (*series.mode == InitMode::Correlated ? "correlated" : "uncorrelated");
  std::fprintf(f, "%s\n", header.c_str());
  std::fprintf(f, "t,value\n");
  for (long k = 0; k < series.size(); ++k)
    std::fprintf(f, "%.17g,%.17g\n", series.grid_step * k, series.values[k]);
  std::fclose(f);
}

void write_green_csv(const GreenTable& green, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  std::fprintf(f, "t,I,Delta\n");
  for (long k = 0; k < green.size(); ++k)
    std::fprintf(f, "%.17g,%.17g,%.17g\n", green.grid_step * k, green.I[k],
                 green.Delta[k]);
  std::fclose(f);
}

}  // namespace oscbath
