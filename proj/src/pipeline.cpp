#include "crtsis/pipeline.hpp"

#include <string>

namespace crtsis {
namespace {

struct PairRef {
  int row;
  int left_col;  // even column; the pair is (left_col, left_col + 1)
};

inline PairRef pair_at(int pair_index, int width) {
  const int pairs_per_row = width / 2;
  return {pair_index / pairs_per_row, 2 * (pair_index % pairs_per_row)};
}

// Gather scramble: destination pair k takes source pair forward[k].
template <typename Matrix>
Matrix scramble_pairs(const Matrix& src, const ScramblePermutation& perm) {
  Matrix dst(src.rows(), src.cols());
  const int width = static_cast<int>(src.cols());
  for (std::size_t k = 0; k < perm.forward.size(); ++k) {
    const PairRef d = pair_at(static_cast<int>(k), width);
    const PairRef s = pair_at(static_cast<int>(perm.forward[k]), width);
    dst(d.row, d.left_col) = src(s.row, s.left_col);
    dst(d.row, d.left_col + 1) = src(s.row, s.left_col + 1);
  }
  return dst;
}

template <typename Matrix>
Matrix unscramble_pairs(const Matrix& src, const ScramblePermutation& perm) {
  Matrix dst(src.rows(), src.cols());
  const int width = static_cast<int>(src.cols());
  for (std::size_t k = 0; k < perm.forward.size(); ++k) {
    const PairRef s = pair_at(static_cast<int>(k), width);
    const PairRef d = pair_at(static_cast<int>(perm.forward[k]), width);
    dst(d.row, d.left_col) = src(s.row, s.left_col);
    dst(d.row, d.left_col + 1) = src(s.row, s.left_col + 1);
  }
  return dst;
}

void check_share_key_geometry(const ImageShare& share, const SisKeyMatrix& key) {
  if (share.residues.rows() != key.primes.rows() || share.residues.cols() != key.primes.cols())
    fail(Errc::dimension_mismatch, "share and key dimensions differ");
  if (share.shareholder_index != key.shareholder_index)
    fail(Errc::dimension_mismatch, "share and key belong to different shareholders");
}

}  // namespace

std::size_t count_available_pairs(const BitMatrix& availability) {
  std::size_t count = 0;
  for (int x = 0; x < availability.rows(); ++x) {
    for (int y = 0; y + 1 < availability.cols(); y += 2) {
      if (availability(x, y) || availability(x, y + 1)) ++count;
    }
  }
  return count;
}

std::pair<PreprocessedImage, SideInfo> preprocess_image(const PixelMatrix& image,
                                                        std::uint16_t h_fid,
                                                        std::uint64_t scramble_seed) {
  const int height = static_cast<int>(image.rows());
  const int width = static_cast<int>(image.cols());
  if (width % 2 != 0) fail(Errc::odd_width, "image width must be even");

  const std::size_t pair_count = static_cast<std::size_t>(height) * width / 2;
  const ScramblePermutation perm = gen_permutation(scramble_seed, pair_count);
  const PixelMatrix scrambled = scramble_pairs(image, perm);

  PreprocessedImage pre;
  pre.values.resize(height, width);
  SideInfo side;
  side.availability = BitMatrix::Zero(height, width);
  side.scramble_seed = scramble_seed;
  side.h_fid = h_fid;
  side.payload_length = 0;

  for (int x = 0; x < height; ++x) {
    for (int y = 0; y < width; y += 2) {
      const int p1 = scrambled(x, y);
      const int p2 = scrambled(x, y + 1);
      const auto [hl, order] = pair_to_hl(p1, p2);
      if (is_available(hl, h_fid)) {
        pre.values(x, y) = static_cast<std::uint16_t>(hl.h);
        pre.values(x, y + 1) = static_cast<std::uint16_t>(hl.l);
        if (order == PairOrder::first_larger)
          side.availability(x, y) = 1;
        else
          side.availability(x, y + 1) = 1;
      } else {
        pre.values(x, y) = static_cast<std::uint16_t>(p1);
        pre.values(x, y + 1) = static_cast<std::uint16_t>(p2);
      }
    }
  }
  return {std::move(pre), std::move(side)};
}

std::vector<ImageShare> share_image(const PreprocessedImage& pre,
                                    const std::vector<SisKeyMatrix>& keys,
                                    const PublicRandomness& randomness, const SisParams& params) {
  const int height = static_cast<int>(pre.values.rows());
  const int width = static_cast<int>(pre.values.cols());
  if (randomness.r.rows() != height || randomness.r.cols() != width)
    fail(Errc::dimension_mismatch, "randomizer matrix does not match the image");

  std::vector<ImageShare> shares;
  shares.reserve(keys.size());
  for (const SisKeyMatrix& key : keys) {
    if (key.primes.rows() != height || key.primes.cols() != width)
      fail(Errc::dimension_mismatch, "key matrix does not match the image");
    if (!key.pristine()) fail(Errc::labeled_key, "key matrix carries skip labels");

    ImageShare share;
    share.role = ShareRole::plain;
    share.shareholder_index = key.shareholder_index;
    share.residues.resize(height, width);
    for (int x = 0; x < height; ++x) {
      for (int y = 0; y < width; ++y) {
        const std::uint64_t r = randomness.r(x, y);
        if (r >= params.r_bound)
          fail(Errc::randomizer_out_of_range, "randomizer entry exceeds its bound");
        const std::uint64_t lifted = pre.values(x, y) + r * params.q0;
        share.residues(x, y) = static_cast<std::uint16_t>(lifted % key.primes(x, y));
      }
    }
    shares.push_back(std::move(share));
  }
  return shares;
}

std::vector<ImageShare> hde_embed(const std::vector<ImageShare>& shares,
                                  const std::vector<SisKeyMatrix>& keys, const SisParams& params,
                                  SideInfo& side, const BitVec& payload) {
  if (shares.empty() || shares.size() != keys.size())
    fail(Errc::dimension_mismatch, "need one key per share");
  const int height = shares.front().height();
  const int width = shares.front().width();
  if (side.availability.rows() != height || side.availability.cols() != width)
    fail(Errc::side_info_mismatch, "availability map does not match the shares");
  for (std::size_t i = 0; i < shares.size(); ++i) {
    if (shares[i].role != ShareRole::plain)
      fail(Errc::role_mismatch, "HDE embedding expects plain shares");
    check_share_key_geometry(shares[i], keys[i]);
    if (!keys[i].pristine()) fail(Errc::labeled_key, "key matrix carries skip labels");
  }
  if (payload.size() > count_available_pairs(side.availability))
    fail(Errc::payload_too_large, "payload exceeds the available pair count");

  std::vector<ImageShare> marked = shares;
  std::vector<ScalarShare> column(shares.size());
  std::size_t bit_index = 0;
  for (int x = 0; x < height && bit_index < payload.size(); ++x) {
    for (int y = 0; y < width && bit_index < payload.size(); y += 2) {
      if (!side.availability(x, y) && !side.availability(x, y + 1)) continue;

      const int bit = payload[bit_index];
      for (std::size_t i = 0; i < shares.size(); ++i) {
        column[i] = {keys[i].primes(x, y), shares[i].residues(x, y)};
      }
      // Doubling headroom: r is drawn below u/(2 q0), so 2g+1 < u holds for
      // every dealer-produced share set. If a hand-built set breaches it,
      // the pair is demoted and the bit moves on, mirroring the overflow
      // labelling rule.
      const uint128 lifted = crt_combine(column, params.t);
      if (2 * lifted + static_cast<unsigned>(bit) >= uint128{params.u}) {
        side.availability(x, y) = 0;
        side.availability(x, y + 1) = 0;
        continue;
      }

      for (std::size_t i = 0; i < shares.size(); ++i) {
        const std::uint32_t id = keys[i].primes(x, y);
        const std::uint32_t data_share = (shares[i].residues(x, y) + static_cast<std::uint32_t>(bit)) % id;
        marked[i].residues(x, y) =
            static_cast<std::uint16_t>((shares[i].residues(x, y) + data_share) % id);
      }
      ++bit_index;
    }
  }
  if (bit_index < payload.size())
    fail(Errc::payload_too_large, "payload no longer fits after overflow demotions");

  for (ImageShare& share : marked) share.role = ShareRole::hde_marked;
  side.payload_length = static_cast<std::uint32_t>(payload.size());
  return marked;
}

PixelMatrix reconstruct_image(std::span<const ImageShare> shares,
                              std::span<const SisKeyMatrix> keys, const SisParams& params,
                              const SideInfo& side) {
  if (shares.size() < static_cast<std::size_t>(params.t))
    fail(Errc::insufficient_shares, "got " + std::to_string(shares.size()) + " shares, need " +
                                        std::to_string(params.t));
  if (keys.size() != shares.size()) fail(Errc::dimension_mismatch, "need one key per share");

  const ShareRole role = shares.front().role;
  if (role != ShareRole::plain && role != ShareRole::hde_marked)
    fail(Errc::role_mismatch, "shares must be recovered from DE-IS marking first");
  for (const ImageShare& share : shares) {
    if (share.role != role) fail(Errc::mixed_roles, "shares carry mixed roles");
  }

  const int height = shares.front().height();
  const int width = shares.front().width();
  if (side.availability.rows() != height || side.availability.cols() != width)
    fail(Errc::side_info_mismatch, "availability map does not match the shares");
  for (std::size_t i = 0; i < shares.size(); ++i) {
    check_share_key_geometry(shares[i], keys[i]);
    if (!keys[i].pristine()) fail(Errc::labeled_key, "key matrix carries skip labels");
  }

  // Position-wise CRT back to the (possibly marked) preprocessed values.
  ValueMatrix values(height, width);
  std::vector<ScalarShare> column(shares.size());
  for (int x = 0; x < height; ++x) {
    for (int y = 0; y < width; ++y) {
      for (std::size_t i = 0; i < shares.size(); ++i) {
        column[i] = {keys[i].primes(x, y), shares[i].residues(x, y)};
      }
      values(x, y) = static_cast<std::uint16_t>(reconstruct_scalar(column, params.q0, params.t));
    }
  }

  // Invert the pair transform, then the scramble.
  PixelMatrix scrambled(height, width);
  for (int x = 0; x < height; ++x) {
    for (int y = 0; y < width; y += 2) {
      const bool left_big = side.availability(x, y) != 0;
      const bool right_big = side.availability(x, y + 1) != 0;
      if (left_big || right_big) {
        const HlPair hl{static_cast<int>(values(x, y)), static_cast<int>(values(x, y + 1))};
        const auto [p1, p2] =
            hl_to_pair(hl, left_big ? PairOrder::first_larger : PairOrder::second_larger);
        scrambled(x, y) = static_cast<std::uint8_t>(p1);
        scrambled(x, y + 1) = static_cast<std::uint8_t>(p2);
      } else {
        if (values(x, y) > 255 || values(x, y + 1) > 255)
          fail(Errc::inconsistent_shares, "raw pair reconstructs outside [0, 255]");
        scrambled(x, y) = static_cast<std::uint8_t>(values(x, y));
        scrambled(x, y + 1) = static_cast<std::uint8_t>(values(x, y + 1));
      }
    }
  }

  const std::size_t pair_count = static_cast<std::size_t>(height) * width / 2;
  const ScramblePermutation perm = gen_permutation(side.scramble_seed, pair_count);
  return unscramble_pairs(scrambled, perm);
}

std::pair<BitVec, PixelMatrix> hde_extract_restore(const PixelMatrix& marked_image,
                                                   const SideInfo& side) {
  const int height = static_cast<int>(marked_image.rows());
  const int width = static_cast<int>(marked_image.cols());
  if (side.availability.rows() != height || side.availability.cols() != width)
    fail(Errc::side_info_mismatch, "availability map does not match the image");
  if (side.payload_length > count_available_pairs(side.availability))
    fail(Errc::side_info_mismatch, "payload length exceeds the available pair count");

  const std::size_t pair_count = static_cast<std::size_t>(height) * width / 2;
  const ScramblePermutation perm = gen_permutation(side.scramble_seed, pair_count);
  PixelMatrix scrambled = scramble_pairs(marked_image, perm);

  BitVec payload;
  payload.reserve(side.payload_length);
  for (int x = 0; x < height && payload.size() < side.payload_length; ++x) {
    for (int y = 0; y < width && payload.size() < side.payload_length; y += 2) {
      const bool left_big = side.availability(x, y) != 0;
      const bool right_big = side.availability(x, y + 1) != 0;
      if (!left_big && !right_big) continue;

      const int big = left_big ? scrambled(x, y) : scrambled(x, y + 1);
      const int small = left_big ? scrambled(x, y + 1) : scrambled(x, y);
      const int h_marked = big - small;
      if (h_marked < 0) fail(Errc::side_info_mismatch, "order bit contradicts the marked pair");
      const int l = (big + small) / 2;

      const auto [bit, h] = de_extract_h(h_marked);
      payload.push_back(static_cast<std::uint8_t>(bit));
      const auto [p1, p2] = hl_to_pair(
          HlPair{h, l}, left_big ? PairOrder::first_larger : PairOrder::second_larger);
      scrambled(x, y) = static_cast<std::uint8_t>(p1);
      scrambled(x, y + 1) = static_cast<std::uint8_t>(p2);
    }
  }

  return {std::move(payload), unscramble_pairs(scrambled, perm)};
}

}  // namespace crtsis
