#ifndef CRTSIS_PIPELINE_HPP
#define CRTSIS_PIPELINE_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "crtsis/crt.hpp"
#include "crtsis/de.hpp"
#include "crtsis/keying.hpp"
#include "crtsis/types.hpp"

namespace crtsis {

// One shareholder's ciphertext matrix. `deis_base` and `deis_embedded_count`
// are meaningful only while role == deis_marked.
struct ImageShare {
  ShareRole role = ShareRole::plain;
  ShareRole deis_base = ShareRole::plain;
  int shareholder_index = 0;
  ValueMatrix residues;
  std::uint32_t deis_embedded_count = 0;

  int height() const { return static_cast<int>(residues.rows()); }
  int width() const { return static_cast<int>(residues.cols()); }
};

// Dealer-held side information. The availability map lives in the scrambled
// pair domain: within each horizontal pair at most one bit is set, on the
// position of the larger original pixel; an all-zero pair is not embeddable.
struct SideInfo {
  BitMatrix availability;
  std::uint64_t scramble_seed = 0;
  std::uint16_t h_fid = kHfidInfinity;
  std::uint32_t payload_length = 0;
};

// Scrambled image with available pairs replaced by (difference, average) and
// the remaining pairs carried as raw pixels. Every entry is below q0.
struct PreprocessedImage {
  ValueMatrix values;
};

std::size_t count_available_pairs(const BitMatrix& availability);

// Scrambles pixel pairs, classifies each against the overflow and fidelity
// constraints, and rewrites available pairs in (h, l) form.
std::pair<PreprocessedImage, SideInfo> preprocess_image(const PixelMatrix& image,
                                                        std::uint16_t h_fid,
                                                        std::uint64_t scramble_seed);

// Position-wise Asmuth-Bloom sharing of the preprocessed values under each
// shareholder's prime matrix and the public randomizer.
std::vector<ImageShare> share_image(const PreprocessedImage& pre,
                                    const std::vector<SisKeyMatrix>& keys,
                                    const PublicRandomness& randomness, const SisParams& params);

// Homomorphic difference expansion: adds the payload-dependent data share to
// the difference position of each consumed pair, turning every shareholder's
// residue of g into the residue of 2g+b. Updates side.payload_length and, if
// an (artificially constructed) share set ever breaches the doubling
// headroom, clears the pair's availability bits and carries the bit onward.
std::vector<ImageShare> hde_embed(const std::vector<ImageShare>& shares,
                                  const std::vector<SisKeyMatrix>& keys, const SisParams& params,
                                  SideInfo& side, const BitVec& payload);

// CRT reconstruction of all positions followed by pair inversion and
// inverse scrambling. Accepts plain or HDE-marked shares, at least t of them,
// all of one role.
PixelMatrix reconstruct_image(std::span<const ImageShare> shares,
                              std::span<const SisKeyMatrix> keys, const SisParams& params,
                              const SideInfo& side);

// Recovers the payload and the original image from a reconstructed marked
// image: re-scramble, strip the expanded differences of the first
// payload_length available pairs, unscramble.
std::pair<BitVec, PixelMatrix> hde_extract_restore(const PixelMatrix& marked_image,
                                                   const SideInfo& side);

}  // namespace crtsis

#endif  // CRTSIS_PIPELINE_HPP
