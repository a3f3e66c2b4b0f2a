#include "oscbath/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace oscbath {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr long kMaxTauPoints = 4'000'001;
constexpr int kMinQuadPoints = 4096;
constexpr int kMaxQuadPoints = 2'000'000;

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// coth(x) for x = beta*hbar*omega/2 > 0. Below the clamp threshold the
// two-term Laurent series avoids the 1/tanh blow-up in rounding.
double coth_clamped(double beta, double hbar, double omega) {
  const double x = 0.5 * beta * hbar * omega;
  if (beta * hbar * omega < 1e-6) return 1.0 / x + x / 3.0;
  return 1.0 / std::tanh(x);
}

// out[k] = sum_j weight[j] * cos(omega[j] * k * h), evaluated with a rotation
// recurrence so the tau-loop costs no trigonometry.
Array cosine_series(const Array& omega, const Array& weight, double h, long n_tau) {
  Array c = Array::Ones(omega.size());
  Array s = Array::Zero(omega.size());
  const Array cd = (omega * h).cos();
  const Array sd = (omega * h).sin();
  Array out(n_tau);
  for (long k = 0; k < n_tau; ++k) {
    out[k] = (weight * c).sum();
    const Array cn = c * cd - s * sd;
    s = s * cd + c * sd;
    c = cn;
  }
  return out;
}

long tau_point_count(double grid_step, double tau_max) {
  require(grid_step > 0.0, "kernel: grid_step must be > 0");
  require(tau_max >= grid_step, "kernel: tau_max must be >= grid_step");
  const long n = static_cast<long>(std::floor(tau_max / grid_step + 1e-9)) + 1;
  require(n <= kMaxTauPoints, "kernel: tau grid exceeds the size budget");
  return n;
}

// Uniform frequency grid with trapezoid weights, scaled by an extra
// per-frequency factor (m*omega^2 for the friction kernel, the coth-weighted
// cubic for its quantum counterpart).
template <class ExtraFn>
void quadrature_nodes(const SpectralModel& model, double tau_max, ExtraFn&& extra,
                      Array& omega, Array& weight) {
  const double lo = model.low_cut();
  const double hi = model.omega_cut;
  int n = model.quadrature_points;
  if (n <= 0) n = default_quadrature_points(model, tau_max);
  n = std::min(std::max(n, 2), kMaxQuadPoints);
  const double dw = (hi - lo) / (n - 1);
  omega.resize(n);
  weight.resize(n);
  for (int j = 0; j < n; ++j) {
    const double w = lo + dw * j;
    const double trap = (j == 0 || j == n - 1) ? 0.5 : 1.0;
    omega[j] = w;
    weight[j] = trap * dw * model.density(w) * extra(w);
  }
}

KernelTable build_by_quadrature(const SpectralModel& model, KernelKind kind,
                                double beta, double hbar, double grid_step,
                                double tau_max) {
  const long n_tau = tau_point_count(grid_step, tau_max);
  const bool quantum = kind == KernelKind::Quantum;
  const auto extra = [&](double w) {
    return quantum ? 0.5 * model.m * hbar * w * w * w * coth_clamped(beta, hbar, w)
                   : model.m * w * w;
  };

  KernelTable out;
  out.kind = kind;
  out.grid_step = grid_step;
  out.beta = quantum ? beta : 0.0;
  out.hbar = quantum ? hbar : 0.0;

  Array omega, weight;
  if (model.is_discrete_line()) {
    omega = model.table_omega;
    weight.resize(omega.size());
    for (int j = 0; j < omega.size(); ++j)
      weight[j] = model.gamma * model.table_g[j] * extra(omega[j]);
  } else {
    quadrature_nodes(model, tau_max, extra, omega, weight);
  }
  out.values = cosine_series(omega, weight, grid_step, n_tau);
  if (!out.values.allFinite())
    throw std::runtime_error("kernel: quadrature produced non-finite values");
  return out;
}

std::string kind_name(KernelKind kind) {
  return kind == KernelKind::Memory ? "memory" : "quantum";
}

}  // namespace

// ---- SpectralModel ----------------------------------------------------------

SpectralModel SpectralModel::white(double M, double m, double gamma,
                                   double omega_cut, double omega_min) {
  SpectralModel s;
  s.kind = SpectralKind::White;
  s.M = M;
  s.m = m;
  s.gamma = gamma;
  s.omega_cut = omega_cut;
  s.omega_min = omega_min;
  s.validate();
  return s;
}

SpectralModel SpectralModel::lorentzian(double M, double m, double gamma,
                                        double tau_L, double omega_cut,
                                        double omega_min) {
  SpectralModel s;
  s.kind = SpectralKind::Lorentzian;
  s.M = M;
  s.m = m;
  s.gamma = gamma;
  s.tau_L = tau_L;
  s.omega_cut = omega_cut;
  s.omega_min = omega_min;
  s.validate();
  return s;
}

SpectralModel SpectralModel::tabulated(Array omega, Array g, double M, double m,
                                       double coupling_scale) {
  SpectralModel s;
  s.kind = SpectralKind::Tabulated;
  s.M = M;
  s.m = m;
  s.gamma = coupling_scale;
  s.table_omega = std::move(omega);
  s.table_g = std::move(g);
  if (s.table_omega.size() > 0) {
    s.omega_min = s.table_omega[0];
    s.omega_cut = s.table_omega[s.table_omega.size() - 1];
  }
  s.validate();
  return s;
}

double SpectralModel::low_cut() const {
  return omega_min > 0.0 ? omega_min : 1e-3 * omega_cut;
}

bool SpectralModel::is_discrete_line() const {
  return kind == SpectralKind::Tabulated && table_omega.size() == 1;
}

double SpectralModel::density(double omega) const {
  switch (kind) {
    case SpectralKind::White:
      return 2.0 * M * gamma / (kPi * m * omega * omega);
    case SpectralKind::Lorentzian: {
      // Normalized so the band integral of m*omega^2*density*cos reproduces
      // the exponential kernel 2*M*gamma/tau_L * exp(-tau/tau_L).
      const double wt = omega * tau_L;
      return 4.0 * M * gamma / (kPi * m * omega * omega) / (1.0 + wt * wt);
    }
    case SpectralKind::Tabulated: {
      const long n = table_omega.size();
      if (n == 1)
        return omega == table_omega[0] ? gamma * table_g[0] : 0.0;
      if (omega < table_omega[0] || omega > table_omega[n - 1]) return 0.0;
      const double* lo = table_omega.data();
      const double* pos = std::upper_bound(lo, lo + n, omega);
      long j = std::max<long>(1, pos - lo);
      j = std::min(j, n - 1);
      const double t = (omega - table_omega[j - 1]) / (table_omega[j] - table_omega[j - 1]);
      return gamma * ((1.0 - t) * table_g[j - 1] + t * table_g[j]);
    }
  }
  return 0.0;
}

void SpectralModel::validate() const {
  require(M > 0.0, "spectral: M must be > 0");
  require(m > 0.0, "spectral: m must be > 0");
  require(gamma >= 0.0, "spectral: gamma must be >= 0");
  require(quadrature_points >= 0, "spectral: quadrature_points must be >= 0");
  if (kind == SpectralKind::Tabulated) {
    const long n = table_omega.size();
    require(n >= 1, "spectral: table must have at least one row");
    require(table_omega.size() == table_g.size(),
            "spectral: table columns differ in length");
    require(table_omega[0] > 0.0, "spectral: table frequencies must be > 0");
    for (long j = 1; j < n; ++j)
      require(table_omega[j] > table_omega[j - 1],
              "spectral: table frequencies must be strictly increasing");
    require((table_g >= 0.0).all(), "spectral: density values must be >= 0");
    return;
  }
  require(omega_cut > 0.0, "spectral: omega_cut must be > 0");
  require(omega_min >= 0.0, "spectral: omega_min must be >= 0");
  require(low_cut() < omega_cut, "spectral: omega_min must be < omega_cut");
  if (kind == SpectralKind::Lorentzian)
    require(tau_L > 0.0, "spectral: tau_L must be > 0");
}

int default_quadrature_points(const SpectralModel& model, double tau_max) {
  const double band = model.omega_cut - model.low_cut();
  const double by_period = 8.0 * band * tau_max / (2.0 * kPi);
  int n = std::max<int>(kMinQuadPoints, static_cast<int>(std::ceil(by_period)));
  return std::min(std::max(n, 2), kMaxQuadPoints);
}

// ---- KernelTable ------------------------------------------------------------

bool KernelTable::pure_impulse() const {
  return size() == 0 || values.abs().maxCoeff() == 0.0;
}

void KernelTable::validate() const {
  require(grid_step > 0.0, "kernel: grid_step must be > 0");
  require(size() >= 2, "kernel: table must hold at least two points");
  if (!values.allFinite())
    throw std::invalid_argument("kernel: table holds non-finite values");
  if (kind == KernelKind::Quantum) {
    require(beta > 0.0, "kernel: quantum table needs beta > 0");
    require(hbar > 0.0, "kernel: quantum table needs hbar > 0");
  }
}

KernelTable memory_kernel(const SpectralModel& model, double grid_step,
                          double tau_max) {
  model.validate();
  const long n_tau = tau_point_count(grid_step, tau_max);
  if (model.kind == SpectralKind::White) {
    KernelTable out;
    out.kind = KernelKind::Memory;
    out.impulse_weight = 2.0 * model.M * model.gamma;
    out.grid_step = grid_step;
    out.values = Array::Zero(n_tau);
    return out;
  }
  if (model.kind == SpectralKind::Lorentzian) {
    KernelTable out;
    out.kind = KernelKind::Memory;
    out.grid_step = grid_step;
    out.values.resize(n_tau);
    const double k0 = 2.0 * model.M * model.gamma / model.tau_L;
    for (long k = 0; k < n_tau; ++k)
      out.values[k] = k0 * std::exp(-grid_step * k / model.tau_L);
    return out;
  }
  return build_by_quadrature(model, KernelKind::Memory, 0.0, 0.0, grid_step, tau_max);
}

KernelTable quantum_kernel(const SpectralModel& model, double beta, double hbar,
                           double grid_step, double tau_max) {
  model.validate();
  require(beta > 0.0, "kernel: beta must be > 0");
  require(hbar > 0.0, "kernel: hbar must be > 0");
  if (model.kind == SpectralKind::White) {
    const long n_tau = tau_point_count(grid_step, tau_max);
    KernelTable out;
    out.kind = KernelKind::Quantum;
    out.impulse_weight = 2.0 * model.M * model.gamma / beta;
    out.grid_step = grid_step;
    out.values = Array::Zero(n_tau);
    out.beta = beta;
    out.hbar = hbar;
    return out;
  }
  return build_by_quadrature(model, KernelKind::Quantum, beta, hbar, grid_step,
                             tau_max);
}

double power_spectrum(const KernelTable& kernel, double beta, double omega) {
  kernel.validate();
  require(kernel.kind == KernelKind::Memory, "power_spectrum: memory kernel required");
  require(beta > 0.0, "power_spectrum: beta must be > 0");
  require(omega >= 0.0, "power_spectrum: omega must be >= 0");
  if (omega > 0.0) {
    const bool resolvable =
        omega * kernel.tau_max() > 1.0 && omega * kernel.grid_step < kPi;
    require(resolvable, "power_spectrum: omega outside the resolvable band");
  }
  const double h = kernel.grid_step;
  double acc = 0.0;
  const long n = kernel.size();
  for (long k = 0; k < n; ++k) {
    const double trap = (k == 0 || k == n - 1) ? 0.5 : 1.0;
    acc += trap * std::cos(omega * h * k) * kernel.values[k];
  }
  return (0.5 * kernel.impulse_weight + h * acc) / beta;
}

// ---- CSV --------------------------------------------------------------------

void write_kernel_csv(const KernelTable& kernel, const std::string& path) {
  kernel.validate();
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  std::fprintf(f, "# impulse_weight=%.17g kind=%s\n", kernel.impulse_weight,
               kind_name(kernel.kind).c_str());
  for (long k = 0; k < kernel.size(); ++k)
    std::fprintf(f, "%.17g,%.17g\n", kernel.grid_step * k, kernel.values[k]);
  std::fclose(f);
}

KernelTable read_kernel_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# impulse_weight=", 0) != 0)
    throw std::runtime_error("kernel csv: bad header in " + path);

  KernelTable out;
  {
    std::istringstream hs(line.substr(1));
    std::string field;
    while (hs >> field) {
      if (field.rfind("impulse_weight=", 0) == 0)
        out.impulse_weight = std::stod(field.substr(15));
      else if (field.rfind("kind=", 0) == 0)
        out.kind = field.substr(5) == "quantum" ? KernelKind::Quantum
                                                : KernelKind::Memory;
    }
  }
  std::vector<double> tau, val;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("kernel csv: bad row in " + path);
    tau.push_back(std::stod(line.substr(0, comma)));
    val.push_back(std::stod(line.substr(comma + 1)));
  }
  if (tau.size() < 2) throw std::runtime_error("kernel csv: too few rows in " + path);
  out.grid_step = tau[1] - tau[0];
  out.values = Eigen::Map<const Array>(val.data(), val.size());
  // Quantum tables do not serialize beta/hbar; the caller re-attaches them.
  if (out.kind == KernelKind::Quantum) {
    out.beta = 1.0;
    out.hbar = 1.0;
  }
  out.validate();
  return out;
}

}  // namespace oscbath
