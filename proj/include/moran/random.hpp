#pragma once

#include <cstdint>

namespace moran {

/// SplitMix64: tiny, portable and splittable by hashing (seed, stream index).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  /// Independent generator for stream `index` derived from `seed`.
  static SplitMix64 split(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 base(seed ^ (0xD1B54A32D192ED03ULL * (index + 1)));
    return SplitMix64(base.next());
  }

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [lo, hi]; modulo bias is negligible for the small ranges used.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next() % span);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

}  // namespace moran
