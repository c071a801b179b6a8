#ifndef CRTSIS_DEIS_HPP
#define CRTSIS_DEIS_HPP

#include <cstdint>

#include "crtsis/keying.hpp"
#include "crtsis/pipeline.hpp"
#include "crtsis/rng.hpp"
#include "crtsis/types.hpp"

namespace crtsis {

// A residue can be expanded against its prime when the doubled difference
// stays below the prime: 2 * (id - c) < id, i.e. c > id / 2.
bool deis_available(std::uint32_t c, std::uint32_t id);

// deis_available plus one unit of headroom for the worst-case bit, so the
// marked residue 2 * (id - c) + 1 also stays below id. The two differ only at
// c == (id + 1) / 2; embedding demotes that boundary position.
bool deis_embeddable(std::uint32_t c, std::uint32_t id);

// Capacity of a share under a pristine key: the number of embeddable
// positions.
std::size_t deis_capacity(const ImageShare& share, const SisKeyMatrix& key);

struct DeisResult {
  ImageShare marked;        // role deis_marked, base role preserved
  SisKeyMatrix labeled_key;  // even entries mark skipped positions
  std::uint32_t embedded_count = 0;
};

// Row-major scan. Non-embeddable positions get their key entry lowered to the
// even label and keep their residue; embeddable positions consume one payload
// bit, keystream-encrypted, until the payload runs out, after which they are
// demoted as well so extraction needs no length field.
DeisResult deis_embed(const ImageShare& share, const SisKeyMatrix& key, const BitVec& payload,
                      const KeyStream& ks);

// Reads one bit from every odd-labeled position in embed order and decrypts
// it with the keystream.
BitVec deis_extract(const ImageShare& marked, const SisKeyMatrix& labeled_key,
                    const KeyStream& ks);

struct DeisRecovered {
  ImageShare share;     // bit-exact pre-embed share
  SisKeyMatrix key;     // pristine again
};

// Inverse of deis_embed; needs no keystream.
DeisRecovered deis_recover(const ImageShare& marked, const SisKeyMatrix& labeled_key);

}  // namespace crtsis

#endif  // CRTSIS_DEIS_HPP
