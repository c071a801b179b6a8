#ifndef CRTSIS_RNG_HPP
#define CRTSIS_RNG_HPP

#include <cstddef>
#include <cstdint>

#include "crtsis/types.hpp"

namespace crtsis {

// Identifier written into file headers so key material stays reproducible
// across implementations.
inline constexpr std::uint8_t kPrngSplitMix64 = 1;

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

// SplitMix64 in counter mode: output k of a stream is mix(seed + (k+1)*golden),
// so streams are indexable and independent draws never share state.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next_u64() {
    state_ += detail::kGolden;
    return detail::mix64(state_);
  }

  // Unbiased uniform draw from [0, bound) via modulo rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = -bound % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  int next_bit() { return static_cast<int>(next_u64() & 1u); }

 private:
  std::uint64_t state_;
};

// Decorrelated sub-seed for (stream tag, index), e.g. one stream per matrix
// row. Chained finalizers keep the derivation order-sensitive.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
  return detail::mix64(seed ^ detail::mix64(tag + detail::mix64(index + detail::kGolden)));
}

// Data-hiding keystream: bits addressable by embedding order, so embedder and
// extractor agree without sharing any state beyond the seed.
class KeyStream {
 public:
  explicit constexpr KeyStream(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  int bit(std::uint64_t index) const {
    return static_cast<int>(detail::mix64(seed_ + (index + 1) * detail::kGolden) & 1u);
  }

  BitVec bits(std::size_t count) const {
    BitVec out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = static_cast<std::uint8_t>(bit(i));
    return out;
  }

 private:
  std::uint64_t seed_;
};

}  // namespace crtsis

#endif  // CRTSIS_RNG_HPP
