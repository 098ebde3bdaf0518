#pragma once

#include <cstdint>
#include <string_view>

namespace segkit {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Counter-based generator (SplitMix64). Streams for parallel work are made by
/// hashing tags into fresh seeds rather than by sharing state, so generation
/// order never affects the values a stream produces.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() { return splitmix64_next(state_); }

  /// Uniform in [0, 1), 53 mantissa bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). Fixed-point multiply keeps this deterministic
  /// and loop-free; the bias at 64-bit scale is negligible for sampling work.
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * static_cast<unsigned __int128>(n)) >> 64);
  }

  /// Uniform integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

 private:
  std::uint64_t state_;
};

/// One avalanche round over (a, b); used to derive independent substream seeds.
inline std::uint64_t hash_mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a ^ (0x9E3779B97F4A7C15ULL + b * 0xBF58476D1CE4E5B9ULL);
  return splitmix64_next(s);
}

/// FNV-1a, for folding string ids into seeds.
inline std::uint64_t hash_string(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

/// Per-sample seed: hash(dataset_seed, class, sample_index).
inline std::uint64_t derive_seed(std::uint64_t dataset_seed, std::uint64_t class_index,
                                 std::uint64_t sample_index) {
  return hash_mix(hash_mix(dataset_seed, class_index), sample_index);
}

}  // namespace segkit
