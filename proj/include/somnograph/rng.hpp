#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "somnograph/error.hpp"

namespace somnograph {

// Deterministic counter-based generator (splitmix64). The state advances
// along a Weyl sequence and each output is a bijective mix of the counter,
// so identical seeds give identical draw sequences on every platform.
// std::normal_distribution and friends are implementation-defined and are
// deliberately not used anywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [low, high).
  double uniform(double low, double high) { return low + (high - low) * uniform(); }

  // Uniform integer in [0, n). Modulo with rejection of the biased tail.
  std::uint64_t uniform_index(std::uint64_t n) {
    if (n == 0) throw ArgumentError("uniform_index: n must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  // N(mean, stddev^2) via Box-Muller; the paired draw is cached.
  double normal(double mean, double stddev) {
    if (stddev < 0.0) throw ArgumentError("normal: stddev must be non-negative");
    if (has_cached_) {
      has_cached_ = false;
      return mean + stddev * cached_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    cached_ = r * std::sin(theta);
    has_cached_ = true;
    return mean + stddev * r * std::cos(theta);
  }

  // Independent child stream. Parallel code forks, it never shares state.
  Rng fork() { return Rng(next_u64()); }

  // Fisher-Yates shuffle.
  template <class T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_index(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace somnograph
