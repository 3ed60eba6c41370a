#pragma once

#include <cstdint>

namespace vsos {

/// Counter-based generator (splitmix64 finalizer). Draw k is a pure
/// function of (seed, k), so replaying a run replays every draw.
struct CounterRng {
  std::uint64_t seed = 0;
  std::uint64_t counter = 0;

  explicit CounterRng(std::uint64_t s) : seed(s) {}

  std::uint64_t next() {
    std::uint64_t z = seed + (++counter) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1), 53-bit mantissa.
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + int(next() % std::uint64_t(hi - lo + 1));
  }
};

}  // namespace vsos
