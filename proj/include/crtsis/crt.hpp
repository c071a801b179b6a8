#ifndef CRTSIS_CRT_HPP
#define CRTSIS_CRT_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "crtsis/types.hpp"

namespace crtsis {

// Validated (t, n) sharing parameters. q0 carries the secret's residue class,
// the pool supplies per-position sharing moduli, u is the product of the t
// smallest pool primes and bounds the lifted secret.
struct SisParams {
  int w = 8;   // bit width of the plaintext symbols
  int t = 0;   // reconstruction threshold
  int n = 0;   // shareholder count
  std::uint32_t q0 = 0;
  std::vector<std::uint32_t> pool;  // ascending, pairwise distinct primes

  std::uint64_t u = 0;        // product of the t smallest pool primes
  std::uint64_t r_bound = 0;  // exclusive randomizer bound, floor(u / (2 q0))
};

struct ScalarShare {
  std::uint32_t modulus = 0;
  std::uint32_t residue = 0;  // in [0, modulus)
};

// Checks primality, the (2^w, 2^{w+1}) window, ascending order, the threshold
// product condition, and derives u and r_bound. The randomizer bound is halved
// relative to the plain Asmuth-Bloom bound so that the doubled lift 2g+1 stays
// below u at every position.
SisParams validate_params(int w, int t, int n, std::uint32_t q0,
                          std::vector<std::uint32_t> pool);

// Lifts m to g = m + r*q0 and reduces g by each modulus. r_bound guards the
// doubling headroom g < u/2.
std::vector<ScalarShare> share_scalar(std::uint64_t m, std::uint64_t r, std::uint32_t q0,
                                      std::uint64_t r_bound,
                                      std::span<const std::uint32_t> moduli);
std::vector<ScalarShare> share_scalar(const SisParams& params, std::uint64_t m, std::uint64_t r,
                                      std::span<const std::uint32_t> moduli);

// Chinese-remainders the first `threshold` shares into the unique lift below
// the product of their moduli. Shares beyond the threshold must agree with it
// exactly; they are never averaged in.
uint128 crt_combine(std::span<const ScalarShare> shares, int threshold);

// crt_combine followed by reduction into the secret's residue class.
std::uint32_t reconstruct_scalar(std::span<const ScalarShare> shares, std::uint32_t q0,
                                 int threshold);

// Residue-wise sum of two shares under a common modulus.
ScalarShare homomorphic_add(const ScalarShare& a, const ScalarShare& b);

// Threshold product condition restated over an arbitrary prime subset:
// product of its t smallest members must exceed q0 times the product of its
// t-1 largest. `subset` must be sorted ascending.
bool subset_threshold_holds(std::uint32_t q0, int t, std::span<const std::uint32_t> subset);

bool is_prime(std::uint64_t v);

}  // namespace crtsis

#endif  // CRTSIS_CRT_HPP
