#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ovr {

/// Mixes 64-bit state into a well-distributed output (splitmix64 finalizer).
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic random stream.
///
/// Streams are derived from (master seed, episode index, role) so that every
/// episode and every consumer inside an episode draws from a disjoint,
/// reproducible sequence regardless of scheduling.  Uniform doubles are built
/// from the top 53 bits of the engine output, so results do not depend on
/// library-specific distribution implementations.
class RngStream {
 public:
  /// Role tags keep consumers inside one episode on disjoint streams.
  enum Role : std::uint64_t {
    kSampler = 1,
    kAdversary = 2,
    kInit = 3,
    kData = 4,
    kSplit = 5,
  };

  RngStream(std::uint64_t master, std::uint64_t episode, std::uint64_t role)
      : engine_(mix64(mix64(mix64(master) ^ episode) ^ (role * 0x9e3779b97f4a7c15ULL))) {}

  explicit RngStream(std::uint64_t seed) : engine_(mix64(seed)) {}

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // Rejection sampling keeps the draw exactly uniform.
    std::uint64_t bound = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do { x = engine_(); } while (x >= bound);
    return x % n;
  }

  /// Standard normal via Box-Muller; implementation-independent.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1, u2;
    do { u1 = uniform(); } while (u1 <= 0.0);
    u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace ovr
