#pragma once

#include <cstdint>

namespace scrip {

/// Counter-based generator (splitmix64). The state advances by a fixed
/// increment and the output is a strong mix of the counter, so independent
/// streams are obtained by seeding with decorrelated starting counters.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1), 53 bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). Bitmask rejection keeps it exactly uniform
  /// and platform-independent.
  std::uint64_t next_below(std::uint64_t n) {
    if (n <= 1) return 0;
    std::uint64_t mask = ~std::uint64_t{0} >> __builtin_clzll(n - 1 | 1);
    for (;;) {
      std::uint64_t r = next() & mask;
      if (r < n) return r;
    }
  }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// One stream per random purpose within a simulation run, so adding or
/// removing draws for one purpose never perturbs the others.
struct RngStreams {
  Rng requester;
  Rng ability;
  Rng volunteer;
  Rng server;

  static RngStreams from_seed(std::uint64_t seed) {
    return RngStreams{
        Rng(Rng::mix(seed ^ 0x72657175ULL)),
        Rng(Rng::mix(seed ^ 0x6162696cULL)),
        Rng(Rng::mix(seed ^ 0x766f6c75ULL)),
        Rng(Rng::mix(seed ^ 0x73657276ULL)),
    };
  }
};

}  // namespace scrip
