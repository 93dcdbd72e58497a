#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace head {

/// Deterministic random source. Every stochastic operation in the library
/// takes one of these explicitly; nothing reads global or time-based state.
///
/// Streams form a tree: `substream("name")` and `substream(index)` derive
/// independent children from the parent's seed without consuming parent
/// draws, so the derivation order of siblings never matters.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

  std::uint64_t seed() const noexcept { return seed_; }

  RngStream substream(std::string_view name) const {
    return RngStream(mix(seed_ ^ fnv1a(name)));
  }

  RngStream substream(std::uint64_t index) const {
    return RngStream(mix(seed_ + 0x9e3779b97f4a7c15ULL * (index + 1)));
  }

  /// Uniform double in [0, 1) built from the top 53 bits, so the sequence
  /// is identical on every standard library.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  double normal() { return normal_(engine_); }

  std::uint64_t next_u64() { return engine_(); }

 private:
  static constexpr std::uint64_t mix(std::uint64_t x) noexcept {
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  static constexpr std::uint64_t fnv1a(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return h;
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

}  // namespace head
