// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <utility>

namespace corgi {

/// SplitMix64 (Steele, Lea, Flood). Chosen because it is trivial to
/// reimplement bit-for-bit in any language, so shuffles are portable.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, bound) by plain modulo; bias is below 2^-40 for the
  /// bounds used here and the rule is easy to mirror elsewhere.
  constexpr std::uint64_t below(std::uint64_t bound) { return next() % bound; }

  /// Uniform double in [0, 1) from the top 53 bits.
  constexpr double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  constexpr std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

/// Fisher-Yates from the back: for i = n-1 .. 1, swap(i, below(i + 1)).
template <typename T>
void fisher_yates(std::span<T> items, SplitMix64& rng) {
  if (items.size() < 2) return;
  for (std::size_t i = items.size() - 1; i > 0; --i) {
    auto j = static_cast<std::size_t>(rng.below(i + 1));
    std::swap(items[i], items[j]);
  }
}

}  // namespace corgi
