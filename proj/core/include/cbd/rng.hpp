#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>

namespace cbd {

/// Deterministic random source. Variates are derived from raw mt19937_64
/// words by hand (std::*_distribution output is not pinned by the standard,
/// which would break byte-identical generation across toolchains).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t word() { return engine_(); }

  /// Uniform on (0, 1].
  double uniform01() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  /// Symmetric Dirichlet with concentration 1: normalized i.i.d.
  /// exponentials, uniform over the probability 3-simplex.
  std::array<double, 4> dirichlet4() {
    std::array<double, 4> out;
    double total = 0.0;
    for (double& x : out) {
      x = -std::log(uniform01());
      total += x;
    }
    if (total <= 0.0) {
      return {0.25, 0.25, 0.25, 0.25};
    }
    for (double& x : out) {
      x /= total;
    }
    return out;
  }

private:
  std::mt19937_64 engine_;
};

} // namespace cbd
