#ifndef CRTSIS_DE_HPP
#define CRTSIS_DE_HPP

#include <algorithm>
#include <cstdint>
#include <utility>

#include "crtsis/types.hpp"

namespace crtsis {

// Difference / average form of a pixel pair, kept canonical with the larger
// pixel first so h is never negative.
struct HlPair {
  int h = 0;  // difference, max - min
  int l = 0;  // floor average
};

enum class PairOrder : std::uint8_t {
  first_larger = 0,  // also the tie case
  second_larger = 1,
};

// Fidelity limit sentinel: any pair difference qualifies.
inline constexpr std::uint16_t kHfidInfinity = 0xFFFF;

inline std::pair<HlPair, PairOrder> pair_to_hl(int p1, int p2) {
  const PairOrder order = p1 >= p2 ? PairOrder::first_larger : PairOrder::second_larger;
  const int big = p1 >= p2 ? p1 : p2;
  const int small = p1 >= p2 ? p2 : p1;
  return {HlPair{big - small, (p1 + p2) / 2}, order};
}

// Inverse transform; the larger pixel goes to the slot named by `order`.
inline std::pair<int, int> hl_to_pair(const HlPair& hl, PairOrder order) {
  const int big = hl.l + (hl.h + 1) / 2;
  const int small = hl.l - hl.h / 2;
  if (big < 0 || big > 255 || small < 0 || small > 255)
    fail(Errc::overflowed_pair, "pair transform leaves [0, 255]");
  return order == PairOrder::first_larger ? std::make_pair(big, small)
                                          : std::make_pair(small, big);
}

// A pair can carry a bit when the expanded difference 2h+1 still maps back
// into [0, 255] for the worst-case bit, and h respects the fidelity limit.
inline bool is_available(const HlPair& hl, std::uint16_t h_fid) {
  const int cap = std::min(2 * (255 - hl.l), 2 * hl.l + 1);
  if (hl.h > cap) return false;
  if (2 * hl.h + 1 > cap) return false;
  return hl.h <= static_cast<int>(h_fid);
}

inline int de_embed_h(const HlPair& hl, int bit) {
  if (!is_available(hl, kHfidInfinity))
    fail(Errc::not_available, "pair cannot absorb an expanded difference");
  return 2 * hl.h + bit;
}

inline std::pair<int, int> de_extract_h(int h_marked) {
  return {h_marked & 1, h_marked >> 1};
}

}  // namespace crtsis

#endif  // CRTSIS_DE_HPP
