#include "crtsis/crt.hpp"

#include <algorithm>
#include <string>

namespace crtsis {
namespace {

// Extended Euclid on signed 128-bit words; returns gcd(a, b) and x with
// a*x == gcd (mod b).
__int128 egcd(__int128 a, __int128 b, __int128& x, __int128& y) {
  if (b == 0) {
    x = 1;
    y = 0;
    return a;
  }
  __int128 x1 = 0, y1 = 0;
  const __int128 g = egcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

uint128 mod_inverse(uint128 a, uint128 m) {
  __int128 x = 0, y = 0;
  egcd(static_cast<__int128>(a % m), static_cast<__int128>(m), x, y);
  __int128 r = x % static_cast<__int128>(m);
  if (r < 0) r += static_cast<__int128>(m);
  return static_cast<uint128>(r);
}

std::string u128_str(uint128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  return s;
}

}  // namespace

bool is_prime(std::uint64_t v) {
  if (v < 2) return false;
  for (std::uint64_t d = 2; d * d <= v; ++d) {
    if (v % d == 0) return false;
  }
  return true;
}

bool subset_threshold_holds(std::uint32_t q0, int t, std::span<const std::uint32_t> subset) {
  uint128 smallest = 1;
  for (int i = 0; i < t; ++i) smallest *= subset[static_cast<std::size_t>(i)];
  uint128 largest = q0;
  for (int j = 0; j < t - 1; ++j) largest *= subset[subset.size() - 1 - static_cast<std::size_t>(j)];
  return smallest > largest;
}

SisParams validate_params(int w, int t, int n, std::uint32_t q0, std::vector<std::uint32_t> pool) {
  if (w < 1 || w > 15) fail(Errc::params_too_large, "bit width w must be in [1, 15]");
  if (t < 2) fail(Errc::threshold_condition_violated, "threshold t must be at least 2");
  if (n <= t) fail(Errc::threshold_condition_violated, "party count n must exceed t");
  if (pool.size() < static_cast<std::size_t>(n))
    fail(Errc::pool_too_small, "pool holds fewer than n primes");

  const std::uint64_t low = 1ULL << w;
  const std::uint64_t high = 1ULL << (w + 1);

  if (!is_prime(q0)) fail(Errc::not_prime, "q0 = " + std::to_string(q0) + " is not prime");
  if (q0 < low || q0 > high)
    fail(Errc::pool_out_of_range, "q0 = " + std::to_string(q0) + " outside [2^w, 2^{w+1}]");

  for (std::size_t i = 0; i < pool.size(); ++i) {
    const std::uint32_t q = pool[i];
    if (!is_prime(q)) fail(Errc::not_prime, "pool prime " + std::to_string(q) + " is not prime");
    if (q <= low || q >= high)
      fail(Errc::pool_out_of_range,
           "pool prime " + std::to_string(q) + " outside (2^w, 2^{w+1})");
    if (q <= q0) fail(Errc::pool_out_of_range, "pool prime " + std::to_string(q) + " <= q0");
    if (i > 0 && pool[i] <= pool[i - 1])
      fail(Errc::pool_out_of_range, "pool must be strictly ascending");
  }

  uint128 u = 1;
  for (int i = 0; i < t; ++i) u *= pool[static_cast<std::size_t>(i)];
  // v1 keeps u (and hence g and r_bound) inside 64-bit storage; every product
  // met during reconstruction then fits a 128-bit word with room to spare.
  if (u >= (uint128{1} << 63))
    fail(Errc::params_too_large, "product of the t smallest pool primes exceeds 2^63");

  if (!subset_threshold_holds(q0, t, pool))
    fail(Errc::threshold_condition_violated,
         "u = " + u128_str(u) + " does not exceed q0 times the t-1 largest pool primes");

  SisParams params;
  params.w = w;
  params.t = t;
  params.n = n;
  params.q0 = q0;
  params.pool = std::move(pool);
  params.u = static_cast<std::uint64_t>(u);
  params.r_bound = params.u / (2ULL * q0);
  if (params.r_bound < 1) fail(Errc::params_too_large, "randomizer bound is empty");
  return params;
}

std::vector<ScalarShare> share_scalar(std::uint64_t m, std::uint64_t r, std::uint32_t q0,
                                      std::uint64_t r_bound,
                                      std::span<const std::uint32_t> moduli) {
  if (m >= q0) fail(Errc::value_out_of_range, "secret " + std::to_string(m) + " >= q0");
  if (r >= r_bound) fail(Errc::randomizer_out_of_range, "randomizer " + std::to_string(r) + " >= bound");
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    for (std::size_t j = i + 1; j < moduli.size(); ++j) {
      if (moduli[i] == moduli[j])
        fail(Errc::duplicate_modulus, "duplicate modulus " + std::to_string(moduli[i]));
    }
  }

  const uint128 g = uint128{m} + uint128{r} * q0;
  std::vector<ScalarShare> shares;
  shares.reserve(moduli.size());
  for (const std::uint32_t q : moduli) {
    shares.push_back({q, static_cast<std::uint32_t>(g % q)});
  }
  return shares;
}

std::vector<ScalarShare> share_scalar(const SisParams& params, std::uint64_t m, std::uint64_t r,
                                      std::span<const std::uint32_t> moduli) {
  return share_scalar(m, r, params.q0, params.r_bound, moduli);
}

uint128 crt_combine(std::span<const ScalarShare> shares, int threshold) {
  if (threshold < 1) fail(Errc::insufficient_shares, "threshold must be positive");
  if (shares.size() < static_cast<std::size_t>(threshold))
    fail(Errc::insufficient_shares, "got " + std::to_string(shares.size()) + " shares, need " +
                                        std::to_string(threshold));
  for (std::size_t i = 0; i < shares.size(); ++i) {
    if (shares[i].residue >= shares[i].modulus)
      fail(Errc::residue_out_of_range, "residue not reduced by its modulus");
    for (std::size_t j = i + 1; j < shares.size(); ++j) {
      if (shares[i].modulus == shares[j].modulus)
        fail(Errc::duplicate_modulus, "duplicate modulus " + std::to_string(shares[i].modulus));
    }
  }

  // Pairwise combine: fold each share into the running congruence
  // g == combined (mod product). Intermediates stay below product * modulus.
  uint128 combined = shares[0].residue;
  uint128 product = shares[0].modulus;
  for (int i = 1; i < threshold; ++i) {
    const uint128 m = shares[static_cast<std::size_t>(i)].modulus;
    const uint128 c = shares[static_cast<std::size_t>(i)].residue;
    const uint128 delta = (c + m - combined % m) % m;
    combined += product * ((delta * mod_inverse(product % m, m)) % m);
    product *= m;
  }

  for (std::size_t i = static_cast<std::size_t>(threshold); i < shares.size(); ++i) {
    if (combined % shares[i].modulus != shares[i].residue)
      fail(Errc::inconsistent_shares,
           "share with modulus " + std::to_string(shares[i].modulus) + " disagrees");
  }

  return combined;
}

std::uint32_t reconstruct_scalar(std::span<const ScalarShare> shares, std::uint32_t q0,
                                 int threshold) {
  return static_cast<std::uint32_t>(crt_combine(shares, threshold) % q0);
}

ScalarShare homomorphic_add(const ScalarShare& a, const ScalarShare& b) {
  if (a.modulus != b.modulus) fail(Errc::modulus_mismatch, "share moduli differ");
  return {a.modulus,
          static_cast<std::uint32_t>((std::uint64_t{a.residue} + b.residue) % a.modulus)};
}

}  // namespace crtsis
