#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace caqc {

/// Seedable random stream. Named sub-streams derive their state from the
/// master seed and the stream name, so individual stages of a run stay
/// reproducible in isolation.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  static Rng stream(uint64_t seed, const std::string& name) {
    uint64_t h = 1469598103934665603ull;  // FNV-1a
    for (char c : name) {
      h ^= static_cast<uint8_t>(c);
      h *= 1099511628211ull;
    }
    return Rng(seed ^ h);
  }

  uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1), derived portably from the top 53 bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int bit() { return static_cast<int>(engine_() & 1u); }

  /// Uniform integer in [0, m).
  uint64_t below(uint64_t m) { return engine_() % m; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace caqc
