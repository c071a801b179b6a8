#include "crtsis/keying.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace crtsis {
namespace {

enum StreamTag : std::uint64_t {
  kTagKeys = 0x6b657973,        // "keys"
  kTagRandomness = 0x72616e64,  // "rand"
};

}  // namespace

std::vector<SisKeyMatrix> gen_sis_keys(const SisParams& params, int height, int width,
                                       std::uint64_t seed) {
  if (width % 2 != 0) fail(Errc::odd_width, "width must be even");
  const int n = params.n;
  const std::size_t pool_size = params.pool.size();

  std::vector<SisKeyMatrix> keys(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    keys[static_cast<std::size_t>(i)].shareholder_index = i + 1;
    keys[static_cast<std::size_t>(i)].primes.resize(height, width);
  }

  std::vector<std::uint32_t> deck(pool_size);
  std::vector<std::uint32_t> subset(static_cast<std::size_t>(n));
  for (int x = 0; x < height; ++x) {
    SplitMix64 rng(derive_seed(seed, kTagKeys, static_cast<std::uint64_t>(x)));
    for (int y = 0; y < width; ++y) {
      // Partial Fisher-Yates: the first n deck entries become the subset.
      std::iota(deck.begin(), deck.end(), 0);
      for (int i = 0; i < n; ++i) {
        const std::size_t j =
            static_cast<std::size_t>(i) +
            static_cast<std::size_t>(rng.next_below(pool_size - static_cast<std::size_t>(i)));
        std::swap(deck[static_cast<std::size_t>(i)], deck[j]);
        subset[static_cast<std::size_t>(i)] = params.pool[deck[static_cast<std::size_t>(i)]];
        keys[static_cast<std::size_t>(i)].primes(x, y) =
            static_cast<std::uint16_t>(subset[static_cast<std::size_t>(i)]);
      }
      std::sort(subset.begin(), subset.end());
      if (!subset_threshold_holds(params.q0, params.t, subset))
        fail(Errc::subset_condition_violated,
             "drawn prime subset fails the threshold condition at (" + std::to_string(x) + ", " +
                 std::to_string(y) + ")");
    }
  }
  return keys;
}

std::vector<std::uint32_t> sis_key_subset_at(const std::vector<SisKeyMatrix>& keys, int row,
                                             int col) {
  std::vector<std::uint32_t> subset;
  subset.reserve(keys.size());
  for (const SisKeyMatrix& key : keys) subset.push_back(key.primes(row, col));
  return subset;
}

PublicRandomness gen_public_randomness(const SisParams& params, int height, int width,
                                       std::uint64_t seed) {
  PublicRandomness pub;
  pub.r.resize(height, width);
  for (int x = 0; x < height; ++x) {
    SplitMix64 rng(derive_seed(seed, kTagRandomness, static_cast<std::uint64_t>(x)));
    for (int y = 0; y < width; ++y) {
      pub.r(x, y) = rng.next_below(params.r_bound);
    }
  }
  return pub;
}

ScramblePermutation gen_permutation(std::uint64_t seed, std::size_t pair_count) {
  ScramblePermutation perm;
  perm.seed = seed;
  perm.forward.resize(pair_count);
  std::iota(perm.forward.begin(), perm.forward.end(), 0);

  SplitMix64 rng(seed);
  for (std::size_t i = 0; i + 1 < pair_count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.next_below(pair_count - i));
    std::swap(perm.forward[i], perm.forward[j]);
  }

  perm.inverse.resize(pair_count);
  for (std::size_t i = 0; i < pair_count; ++i) perm.inverse[perm.forward[i]] = static_cast<std::uint32_t>(i);
  return perm;
}

}  // namespace crtsis
