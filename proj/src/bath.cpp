#include "oscbath/bath.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "oscbath/rng.hpp"

namespace oscbath {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

BathModes discretize_bath(const SpectralModel& model, int N) {
  model.validate();
  require(N >= 1, "discretize_bath: N must be >= 1");
  require(!model.is_discrete_line() || N == 1,
          "discretize_bath: a discrete line resolves to exactly one oscillator");

  BathModes modes;
  if (model.is_discrete_line()) {
    modes.omegas = model.table_omega;
    modes.weights = Array::Constant(1, model.gamma * model.table_g[0]);
    return modes;
  }

  const double lo = model.low_cut();
  const double hi = model.omega_cut;
  modes.omegas.resize(N);
  modes.weights.resize(N);
  if (N == 1) {
    // Midpoint rule carrying the whole band mass.
    const double mid = 0.5 * (lo + hi);
    modes.omegas[0] = mid;
    modes.weights[0] = model.density(mid) * (hi - lo);
    return modes;
  }
  const double dw = (hi - lo) / (N - 1);
  for (int n = 0; n < N; ++n) {
    const double w = lo + dw * n;
    const double trap = (n == 0 || n == N - 1) ? 0.5 : 1.0;
    modes.omegas[n] = w;
    modes.weights[n] = trap * dw * model.density(w);
  }
  return modes;
}

BathRealization sample_thermal(const BathModes& modes, double m, double beta,
                               double x0, InitMode mode, std::uint64_t seed) {
  require(m > 0.0, "sample_thermal: m must be > 0");
  require(beta > 0.0, "sample_thermal: beta must be > 0");
  require(modes.omegas.size() == modes.weights.size(),
          "sample_thermal: omegas/weights mismatch");
  require((modes.weights >= 0.0).all(), "sample_thermal: weights must be >= 0");
  require((modes.omegas > 0.0).all(), "sample_thermal: frequencies must be > 0");

  BathRealization bath;
  bath.omegas = modes.omegas;
  bath.weights = modes.weights;
  bath.m = m;
  bath.init_mode = mode;
  bath.seed = seed;

  const int n = bath.size();
  const double center = mode == InitMode::Correlated ? x0 : 0.0;
  bath.q.resize(n);
  bath.qdot.resize(n);
  GaussianStream normal(seed);
  for (int i = 0; i < n; ++i) {
    const double mt = m * bath.weights[i];  // effective oscillator mass
    if (mt == 0.0) {
      bath.q[i] = center;
      bath.qdot[i] = 0.0;
      continue;
    }
    const double sq = 1.0 / std::sqrt(beta * mt * bath.omegas[i] * bath.omegas[i]);
    const double sv = 1.0 / std::sqrt(beta * mt);
    bath.q[i] = center + sq * normal();
    bath.qdot[i] = sv * normal();
  }
  return bath;
}

ForceSample random_force(const BathRealization& bath, double x0, double v0,
                         double t0, double t) {
  Array grid(1);
  grid[0] = t;
  const ForceSeries series = random_force_series(bath, x0, v0, t0, grid);
  return {series.r[0], series.delta_f[0]};
}

ForceSeries random_force_series(const BathRealization& bath, double x0, double v0,
                                double t0, const Array& t) {
  require(t.size() >= 1, "random_force_series: empty time grid");
  const int n = bath.size();
  const long nt = t.size();

  // Per-oscillator cosine/sine amplitudes. Uncorrelated draws keep their
  // unshifted positions in the fluctuating part; the -K(t-t0)*x0 transient
  // carries the x0 dependence instead (and the two add up to the correlated
  // expression identically).
  const Array c_n = bath.m * bath.weights * bath.omegas.square();
  const Array a = (bath.q - (bath.init_mode == InitMode::Correlated ? x0 : 0.0)) * c_n;
  const Array b = (bath.qdot - v0) * c_n / bath.omegas;
  // delta_f(t) = -x0 * K(t - t0) with K resynthesized from the same modes.
  const double df_scale = bath.init_mode == InitMode::Uncorrelated ? -x0 : 0.0;

  ForceSeries out;
  out.r.resize(nt);
  out.delta_f.resize(nt);

  // Uniform grids (the common case) advance phases by rotation so only the
  // first sample pays for trigonometry.
  bool uniform = nt >= 2;
  const double h = nt >= 2 ? t[1] - t[0] : 0.0;
  for (long k = 2; uniform && k < nt; ++k)
    uniform = std::abs(t[k] - t[k - 1] - h) <= 1e-12 * (std::abs(t[k]) + 1.0);

  Array c = (bath.omegas * (t[0] - t0)).cos();
  Array s = (bath.omegas * (t[0] - t0)).sin();
  Array cd(n), sd(n);
  if (uniform && nt >= 2) {
    cd = (bath.omegas * h).cos();
    sd = (bath.omegas * h).sin();
  }
  for (long k = 0; k < nt; ++k) {
    if (k > 0) {
      if (uniform) {
        const Array cn = c * cd - s * sd;
        s = s * cd + c * sd;
        c = cn;
      } else {
        const Array phase = bath.omegas * (t[k] - t0);
        c = phase.cos();
        s = phase.sin();
      }
    }
    out.r[k] = (a * c).sum() + (b * s).sum();
    out.delta_f[k] = df_scale * (c_n * c).sum();
  }
  return out;
}

Trajectory integrate_full_system(const FullSystemState& state, const ForceSpec& force,
                                 double dt, long steps, long record_stride) {
  require(dt > 0.0, "integrate_full_system: dt must be > 0");
  require(steps >= 1, "integrate_full_system: steps must be >= 1");
  require(record_stride >= 1, "integrate_full_system: record_stride must be >= 1");
  force.validate();
  const int n = state.bath.size();
  if (n > 0)
    require(dt * state.bath.omegas.maxCoeff() < 0.5,
            "integrate_full_system: dt too coarse for the fastest oscillator");

  require(state.M > 0.0, "integrate_full_system: M must be > 0");
  const double M = state.M;
  const bool bilinear = state.lagrangian == LagrangianForm::Bilinear;
  const Array omega2 = n > 0 ? state.bath.omegas.square().eval() : Array();
  const Array c_n = n > 0 ? (state.bath.m * state.bath.weights * omega2).eval() : Array();
  const double c_sum = n > 0 ? c_n.sum() : 0.0;

  double x = state.x;
  double v = state.xdot;
  Array q = state.bath.q;
  Array u = state.bath.qdot;

  const auto particle_acc = [&](double xx, const Array& qq, double tt) {
    double coupling = 0.0;
    if (n > 0) coupling = (c_n * qq).sum() - (bilinear ? 0.0 : c_sum * xx);
    return (force(tt) + coupling) / M;
  };

  const long n_rec = steps / record_stride + 1;
  Trajectory traj;
  traj.t.resize(n_rec);
  traj.x.resize(n_rec);
  traj.xdot.resize(n_rec);
  traj.t[0] = state.t;
  traj.x[0] = x;
  traj.xdot[0] = v;

  double ax = particle_acc(x, q, state.t);
  Array aq = n > 0 ? (omega2 * (x - q)).eval() : Array();
  long rec = 1;
  for (long step = 1; step <= steps; ++step) {
    const double t_new = state.t + dt * step;
    x += dt * v + 0.5 * dt * dt * ax;
    if (n > 0) q += dt * u + 0.5 * dt * dt * aq;
    const double ax_new = particle_acc(x, q, t_new);
    v += 0.5 * dt * (ax + ax_new);
    if (n > 0) {
      const Array aq_new = omega2 * (x - q);
      u += 0.5 * dt * (aq + aq_new);
      aq = aq_new;
    }
    ax = ax_new;
    if (!std::isfinite(x) || !std::isfinite(v))
      throw std::runtime_error("integrate_full_system: state is no longer finite");
    if (step % record_stride == 0) {
      traj.t[rec] = t_new;
      traj.x[rec] = x;
      traj.xdot[rec] = v;
      ++rec;
    }
  }
  traj.t.conservativeResize(rec);
  traj.x.conservativeResize(rec);
  traj.xdot.conservativeResize(rec);
  return traj;
}

double full_system_energy(const FullSystemState& state) {
  const Array mt = state.bath.m * state.bath.weights;
  double e = 0.5 * state.M * state.xdot * state.xdot;
  if (state.bath.size() > 0) {
    e += 0.5 * (mt * state.bath.qdot.square()).sum();
    e += 0.5 * (mt * state.bath.omegas.square() * (state.bath.q - state.x).square()).sum();
  }
  return e;
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  std::fprintf(f, "t,x,xdot\n");
  for (long k = 0; k < traj.t.size(); ++k)
    std::fprintf(f, "%.17g,%.17g,%.17g\n", traj.t[k], traj.x[k], traj.xdot[k]);
  std::fclose(f);
}

}  // namespace oscbath
