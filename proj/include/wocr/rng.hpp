#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace wocr {

/// mt19937_64 wrapped with hand-rolled uniform/normal draws so that streams
/// are bit-identical across standard libraries (std::*_distribution is not
/// guaranteed portable).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// uniform on [0, 1), 53-bit resolution
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// standard normal via Box-Muller, one spare cached per pair
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = std::max(uniform(), 1e-300);  // keep log() finite
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    spare_ = radius * std::sin(2.0 * std::numbers::pi * u2);
    have_spare_ = true;
    return radius * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// integer on [0, bound); bound > 0
  std::uint64_t integer(std::uint64_t bound) { return engine_() % bound; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

/// Mixes a base seed with a stream index (splitmix64 finalizer) so each
/// simulation run gets an independent, reproducible stream.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace wocr
