#ifndef CRTSIS_KEYING_HPP
#define CRTSIS_KEYING_HPP

#include <cstdint>
#include <vector>

#include "crtsis/crt.hpp"
#include "crtsis/rng.hpp"
#include "crtsis/types.hpp"

namespace crtsis {

// One shareholder's prime matrix. Entries are odd pool primes while pristine;
// share-domain embedding may lower an entry by one as an even "skip" label.
struct SisKeyMatrix {
  int shareholder_index = 0;  // 1-based
  ValueMatrix primes;

  bool pristine() const {
    for (int x = 0; x < primes.rows(); ++x) {
      for (int y = 0; y < primes.cols(); ++y) {
        if (primes(x, y) % 2 == 0) return false;
      }
    }
    return true;
  }
};

struct PublicRandomness {
  RandomizerMatrix r;  // entries in [0, r_bound)
};

// Bijection over pair indices together with its inverse.
struct ScramblePermutation {
  std::uint64_t seed = 0;
  std::vector<std::uint32_t> forward;
  std::vector<std::uint32_t> inverse;
};

// Per position, draws an n-subset of the pool without replacement and deals
// one prime to each shareholder, so the n moduli covering a pixel are always
// pairwise distinct. Rows use independent derived streams.
std::vector<SisKeyMatrix> gen_sis_keys(const SisParams& params, int height, int width,
                                       std::uint64_t seed);

std::vector<std::uint32_t> sis_key_subset_at(const std::vector<SisKeyMatrix>& keys, int row,
                                             int col);

PublicRandomness gen_public_randomness(const SisParams& params, int height, int width,
                                       std::uint64_t seed);

// Fisher-Yates permutation over [0, pair_count).
ScramblePermutation gen_permutation(std::uint64_t seed, std::size_t pair_count);

}  // namespace crtsis

#endif  // CRTSIS_KEYING_HPP
