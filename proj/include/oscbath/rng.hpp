// rng.hpp -- reproducible member substreams and a fixed-layout normal sampler.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace oscbath {

// splitmix64 of master + (index+1)*golden; decorrelates adjacent substreams
// regardless of how the ensemble is chunked across workers.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Standard normals via Box-Muller, exactly two engine draws per variate.
// std::normal_distribution is avoided on purpose: its draw count per variate
// is implementation-defined, which would break cross-platform reproducibility.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}

  double operator()() {
    const double u1 = (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
    const double u2 = static_cast<double>(rng_() >> 11) * 0x1.0p-53;          // [0,1)
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace oscbath
