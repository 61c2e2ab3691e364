#pragma once

#include <cstdint>

namespace rmlab {

// Splittable counter-based PRNG (SplitMix64 core with per-stream gamma).
// Every randomized routine takes one of these explicitly; there is no global
// generator. split() advances the parent, child(i) does not, so indexed
// children are independent of scheduling order.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : state_(seed), gamma_(kGoldenGamma) {}

  std::uint64_t next_u64() {
    state_ += gamma_;
    return mix64(state_);
  }

  // Unbiased uniform draw from [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    // rejection over the largest multiple of bound
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t r;
    do {
      r = next_u64();
    } while (r >= limit);
    return r % bound;
  }

  double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  RandomStream split() {
    const std::uint64_t s = next_u64();
    const std::uint64_t g = next_u64();
    return RandomStream(mix64(s), mix_gamma(g));
  }

  // Deterministic indexed child; does not consume parent state.
  RandomStream child(std::uint64_t index) const {
    const std::uint64_t s = mix64(state_ ^ mix64(index * kGoldenGamma + 0x1d8af066u));
    const std::uint64_t g = mix_gamma(gamma_ ^ mix64(index + 0x6a09e667f3bcc909ull));
    return RandomStream(s, g);
  }

 private:
  RandomStream(std::uint64_t state, std::uint64_t gamma) : state_(state), gamma_(gamma) {}

  static constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ull;

  static std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

  static std::uint64_t mix_gamma(std::uint64_t z) {
    z = mix64(z) | 1ull;
    const int transitions = __builtin_popcountll(z ^ (z >> 1));
    if (transitions < 24) z ^= 0xaaaaaaaaaaaaaaaaull;
    return z;
  }

  std::uint64_t state_;
  std::uint64_t gamma_;
};

}  // namespace rmlab
