#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

// Counter-based splittable random numbers. Every draw is a pure function of
// (key, counter), so streams can be split per entity and results do not
// depend on thread scheduling or batch sizes.

namespace pflm {

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

/// splitmix64 finalizer (Steele, Lea & Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

/// FNV-1a hash of a string literal, used to name RNG streams ("U", "Z", ...).
constexpr std::uint64_t stream_tag(const char* s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  while (*s != '\0') {
    h ^= static_cast<unsigned char>(*s++);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Folds a base seed with a list of discriminators (replicate id, fold index,
/// stream tags, ...) into an independent child seed.
inline std::uint64_t derive_seed(std::uint64_t base,
                                 std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = mix64(base + kGoldenGamma);
  for (std::uint64_t p : parts) h = mix64(h ^ mix64(p + kGoldenGamma));
  return h;
}

/// Random access into a splitmix64 sequence: raw(i) is draw number i.
struct SplitRng {
  std::uint64_t key = 0;

  explicit SplitRng(std::uint64_t seed) : key(seed) {}

  std::uint64_t raw(std::uint64_t i) const { return mix64(key + (i + 1) * kGoldenGamma); }

  /// Uniform in [0, 1), 53 mantissa bits.
  double uniform01(std::uint64_t i) const { return static_cast<double>(raw(i) >> 11) * 0x1.0p-53; }
};

/// Sequential view over a SplitRng; keeps its own counter.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : rng_(seed) {}

  double uniform01() { return rng_.uniform01(next_++); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller; consumes two counters per draw.
  double normal() {
    const double u1 = static_cast<double>((rng_.raw(next_++) >> 11) + 1) * 0x1.0p-53;  // (0,1]
    const double u2 = rng_.uniform01(next_++);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n) {
    const auto k = static_cast<std::size_t>(uniform01() * static_cast<double>(n));
    return k < n ? k : n - 1;
  }

 private:
  SplitRng rng_;
  std::uint64_t next_ = 0;
};

}  // namespace pflm
