#ifndef MEMEKIT_RNG_HPP
#define MEMEKIT_RNG_HPP

#include <cmath>
#include <cstdint>
#include <string_view>

namespace memekit {

/// splitmix64 finalizer. Used both as the RNG step and as the documented
/// seed-derivation hash for composed attacks and per-image pipeline seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Child seed for stage `index` of a composed operation:
/// child = splitmix64(parent ^ splitmix64(index + 1)).
inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) {
  return splitmix64(parent ^ splitmix64(index + 1));
}

/// FNV-1a over a string, folded with a numeric seed. Pipeline per-image
/// seeds come from hash_seed(global_seed, image_id + "/" + attack_kind).
inline std::uint64_t hash_seed(std::uint64_t seed, std::string_view key) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : key) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return splitmix64(seed ^ h);
}

/// Small deterministic generator. All draws are defined here rather than via
/// <random> distributions so output streams are identical across platforms
/// and standard-library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  /// Uniform integer in [0, bound). bound must be >= 1.
  std::uint64_t next_below(std::uint64_t bound) {
    // Multiply-shift mapping; bias is negligible for the small bounds
    // used here (image extents, glyph counts).
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
  }

  /// Uniform integer in [lo, hi] inclusive.
  std::int64_t next_in(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(
                    next_below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  /// Uniform double in [0, 1).
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi].
  double next_real(double lo, double hi) {
    return lo + (hi - lo) * next_unit();
  }

  bool next_bernoulli(double p) { return next_unit() < p; }

  bool next_bool() { return (next_u64() & 1u) != 0; }

  /// Standard normal via Box-Muller. One value per call, no caching, so the
  /// stream position is a pure function of the call count.
  double next_gaussian() {
    double u1 = next_unit();
    double u2 = next_unit();
    while (u1 <= 0.0) u1 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

 private:
  std::uint64_t state_;
};

}  // namespace memekit

#endif  // MEMEKIT_RNG_HPP
