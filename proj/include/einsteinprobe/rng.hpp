#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace ep {

/// SplitMix64 mixing step; used to derive independent per-path seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Seed of path `index` in an ensemble with the given master seed. Paths
/// own independent streams, so ensembles are reproducible under any
/// parallel schedule.
inline std::uint64_t path_seed(std::uint64_t master_seed, std::uint64_t index) {
  return splitmix64(splitmix64(master_seed) ^ splitmix64(index + 1));
}

/// Deterministic Gaussian stream: mt19937_64 with a fixed Box-Muller
/// transform (no library distributions, whose sequences vary across
/// standard library implementations).
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0,1], u2 in [0,1)
    double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1p-53;
    double u2 = static_cast<double>(engine_() >> 11) * 0x1p-53;
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ep
