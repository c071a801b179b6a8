#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <vector>

#include "crtsis/crt.hpp"
#include "crtsis/rng.hpp"

using namespace crtsis;

namespace {

constexpr std::uint64_t kNotFound = ~0ULL;

// Test-side oracle: plain linear search for the combined value over the full
// range below the moduli product. Never touches the pairwise-combine path.
std::uint64_t oracle_search(const std::vector<ScalarShare>& shares) {
  std::uint64_t product = 1;
  for (const ScalarShare& s : shares) product *= s.modulus;
  for (std::uint64_t g = 0; g < product; ++g) {
    bool all = true;
    for (const ScalarShare& s : shares) {
      if (g % s.modulus != s.residue) {
        all = false;
        break;
      }
    }
    if (all) return g;
  }
  return kNotFound;
}

const std::vector<std::uint32_t> kReferencePool = {457, 461, 463, 467, 479, 487, 491, 499, 503, 509};

}  // namespace

TEST_CASE("reference parameters validate with the expected products") {
  const SisParams params = validate_params(8, 5, 7, 257, kReferencePool);
  CHECK(params.u == 21'819'787'184'543ULL);
  // q0 times the four largest pool primes, computed independently by hand.
  const std::uint64_t rhs = 257ULL * 509 * 503 * 499 * 491;
  CHECK(rhs == 16'121'332'245'451ULL);
  CHECK(params.u > rhs);
  CHECK(params.r_bound == params.u / (2 * 257));
  CHECK(params.r_bound >= 1);
}

TEST_CASE("validation error taxonomy") {
  // 17 lies outside (8, 16) once w = 3.
  try {
    validate_params(3, 2, 3, 7, {11, 13, 17});
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::pool_out_of_range);
  }

  try {
    validate_params(8, 5, 7, 257, {457, 459, 463, 467, 479, 487, 491});  // 459 = 27 * 17
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_prime);
  }

  try {
    validate_params(8, 2, 3, 257, {263, 269, 509});  // 263*269 < 257*509
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::threshold_condition_violated);
  }

  try {
    validate_params(8, 5, 7, 257, {457, 461, 463, 467, 479});
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::pool_too_small);
  }

  try {
    validate_params(8, 5, 7, 257, {461, 457, 463, 467, 479, 487, 491});
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::pool_out_of_range);  // not ascending
  }
}

TEST_CASE("scalar sharing matches hand-computed residues") {
  const std::vector<std::uint32_t> toy_moduli = {11, 13, 17};
  const auto shares = share_scalar(5, 1, 7, 10, toy_moduli);
  REQUIRE(shares.size() == 3);
  CHECK(shares[0].residue == 1);
  CHECK(shares[1].residue == 12);
  CHECK(shares[2].residue == 12);

  const auto zeros = share_scalar(0, 0, 7, 10, toy_moduli);
  for (const ScalarShare& s : zeros) CHECK(s.residue == 0);

  const std::vector<std::uint32_t> moduli = {457, 461};
  const auto big = share_scalar(100, 10, 257, 1'000'000, moduli);
  CHECK(big[0].residue == 385);
  CHECK(big[1].residue == 365);
}

TEST_CASE("scalar sharing rejects bad inputs") {
  const std::vector<std::uint32_t> moduli = {11, 13};
  CHECK_THROWS_AS((void)share_scalar(7, 0, 7, 10, moduli), Error);
  CHECK_THROWS_AS((void)share_scalar(5, 10, 7, 10, moduli), Error);
  const std::vector<std::uint32_t> dup = {11, 11};
  CHECK_THROWS_AS((void)share_scalar(5, 1, 7, 10, dup), Error);
}

TEST_CASE("reconstruction inverts sharing and refuses below the threshold") {
  const std::vector<ScalarShare> pair1 = {{11, 1}, {13, 12}};
  CHECK(reconstruct_scalar(pair1, 7, 2) == 5);

  const std::vector<ScalarShare> pair2 = {{13, 12}, {17, 12}};
  CHECK(reconstruct_scalar(pair2, 7, 2) == 5);

  const std::vector<ScalarShare> lone = {{11, 1}};
  CHECK_THROWS_AS((void)reconstruct_scalar(lone, 7, 2), Error);
  try {
    (void)reconstruct_scalar(lone, 7, 2);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::insufficient_shares);
  }
}

TEST_CASE("extra shares are consistency-checked, never averaged") {
  // g = 12; the third share claims g % 17 == 5, which is wrong.
  const std::vector<ScalarShare> shares = {{11, 1}, {13, 12}, {17, 5}};
  try {
    (void)reconstruct_scalar(shares, 7, 2);
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::inconsistent_shares);
  }

  const std::vector<ScalarShare> good = {{11, 1}, {13, 12}, {17, 12}};
  CHECK(reconstruct_scalar(good, 7, 2) == 5);
}

TEST_CASE("homomorphic addition") {
  CHECK(homomorphic_add({11, 1}, {11, 1}).residue == 2);
  CHECK(homomorphic_add({13, 12}, {13, 1}).residue == 0);
  CHECK_THROWS_AS((void)homomorphic_add({11, 1}, {13, 1}), Error);

  // Shares of 5 plus shares of 1 reconstruct to 6 over {11, 13}.
  const std::vector<std::uint32_t> moduli = {11, 13};
  const auto a = share_scalar(5, 1, 7, 10, moduli);
  const auto b = share_scalar(1, 0, 7, 10, moduli);
  const std::vector<ScalarShare> sum = {homomorphic_add(a[0], b[0]),
                                        homomorphic_add(a[1], b[1])};
  CHECK(crt_combine(sum, 2) == 13);
  CHECK(reconstruct_scalar(sum, 7, 2) == 6);
}

TEST_CASE("toy round trip is exhaustive over secrets, randomizers, and subsets") {
  const std::vector<std::uint32_t> moduli = {11, 13, 17};
  const int t = 2;
  for (std::uint64_t m = 0; m < 7; ++m) {
    for (std::uint64_t r = 0; r < 10; ++r) {
      const auto shares = share_scalar(m, r, 7, 10, moduli);
      for (std::size_t i = 0; i < shares.size(); ++i) {
        for (std::size_t j = i + 1; j < shares.size(); ++j) {
          const std::vector<ScalarShare> subset = {shares[i], shares[j]};
          CHECK(reconstruct_scalar(subset, 7, t) == m);
        }
      }
      CHECK(reconstruct_scalar(shares, 7, t) == m);
    }
  }
}

TEST_CASE("additive homomorphism holds whenever the summed lift stays small") {
  const std::vector<std::uint32_t> moduli = {11, 13};
  for (std::uint64_t m1 = 0; m1 < 7; ++m1) {
    for (std::uint64_t m2 = 0; m2 < 7; ++m2) {
      for (std::uint64_t r1 = 0; r1 < 4; ++r1) {
        for (std::uint64_t r2 = 0; r2 < 4; ++r2) {
          // summed lift tops out at 6 + 6 + 6*7 = 54 < 143
          const auto a = share_scalar(m1, r1, 7, 10, moduli);
          const auto b = share_scalar(m2, r2, 7, 10, moduli);
          const std::vector<ScalarShare> sum = {homomorphic_add(a[0], b[0]),
                                                homomorphic_add(a[1], b[1])};
          CHECK(reconstruct_scalar(sum, 7, 2) == (m1 + m2) % 7);
        }
      }
    }
  }
}

TEST_CASE("pairwise combine agrees with the linear-search oracle") {
  SplitMix64 rng(0x5eed);
  const std::vector<std::vector<std::uint32_t>> pools = {
      {11, 13, 17}, {7, 11, 13}, {17, 19, 23}, {23, 29, 31}};
  for (const auto& pool : pools) {
    std::uint64_t product = 1;
    for (const std::uint32_t m : pool) product *= m;
    for (int trial = 0; trial < 200; ++trial) {
      const std::uint64_t g = rng.next_below(product);
      std::vector<ScalarShare> shares;
      for (const std::uint32_t m : pool)
        shares.push_back({m, static_cast<std::uint32_t>(g % m)});
      CHECK(crt_combine(shares, static_cast<int>(pool.size())) == g);
      CHECK(oracle_search(shares) == g);
      CHECK(reconstruct_scalar(shares, 7, static_cast<int>(pool.size())) == g % 7);
    }
  }
}

TEST_CASE("subset threshold condition over sorted subsets") {
  const std::vector<std::uint32_t> subset = {457, 461, 463, 467, 479, 487, 491};
  CHECK(subset_threshold_holds(257, 5, subset));
  const std::vector<std::uint32_t> bad = {263, 269, 509};
  CHECK_FALSE(subset_threshold_holds(257, 2, bad));
}
