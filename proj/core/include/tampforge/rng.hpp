#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <iterator>
#include <string_view>

namespace tampforge {

// Deterministic PRNG used for all instance generation.
//
// Algorithm: xoshiro256** (Blackman & Vigna), seeded through splitmix64.
// Both are fully specified integer recurrences, so a given seed produces
// the same stream on every platform and compiler. std::uniform_*_distribution
// is implementation-defined and must not be used anywhere in generation;
// the helpers below are the only sampling primitives.
class Rng {
public:
  explicit Rng(uint64_t seed) {
    uint64_t x = seed;
    for (auto& word : state_) word = splitmix64(x);
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform integer in [lo, hi], both inclusive. Debiased by rejection.
  int64_t uniform_int(int64_t lo, int64_t hi) {
    const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<int64_t>(next_u64());  // full 64-bit range
    const uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return lo + static_cast<int64_t>(x % span);
  }

  // Uniform double in [lo, hi) with 53 random bits.
  double uniform_real(double lo, double hi) {
    const double unit = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    return lo + unit * (hi - lo);
  }

  bool chance(double p) { return uniform_real(0.0, 1.0) < p; }

  template <typename Seq>
  void shuffle(Seq& items) {
    for (size_t i = items.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(uniform_int(0, static_cast<int64_t>(i) - 1));
      std::swap(items[i - 1], items[j]);
    }
  }

  template <typename Seq>
  auto& pick(Seq& items) {
    return items[static_cast<size_t>(
        uniform_int(0, static_cast<int64_t>(std::size(items)) - 1))];
  }

  static uint64_t splitmix64(uint64_t& x) {
    uint64_t z = (x += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Stable 64-bit hash for deriving sub-stream seeds, e.g.
  // derive_seed(base, "gridworld", 17) for the 17th gridworld instance.
  static uint64_t derive_seed(uint64_t base, std::string_view tag, uint64_t index) {
    uint64_t h = base ^ 0x51'7c'c1'b7'27'22'0a'95ull;
    for (const char c : tag) {
      h ^= static_cast<uint8_t>(c);
      h *= 0x100000001b3ull;
    }
    h ^= index + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    uint64_t x = h;
    return splitmix64(x);
  }

private:
  static uint64_t rotl(uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

  std::array<uint64_t, 4> state_{};
};

}  // namespace tampforge
