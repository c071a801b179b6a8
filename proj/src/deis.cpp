#include "crtsis/deis.hpp"

#include <string>

namespace crtsis {
namespace {

void check_geometry(const ImageShare& share, const SisKeyMatrix& key) {
  if (share.residues.rows() != key.primes.rows() || share.residues.cols() != key.primes.cols())
    fail(Errc::dimension_mismatch, "share and key dimensions differ");
  if (share.shareholder_index != key.shareholder_index)
    fail(Errc::dimension_mismatch, "share and key belong to different shareholders");
}

}  // namespace

bool deis_available(std::uint32_t c, std::uint32_t id) {
  if (c >= id) fail(Errc::residue_out_of_range, "residue " + std::to_string(c) + " >= modulus");
  return 2 * (id - c) < id;
}

bool deis_embeddable(std::uint32_t c, std::uint32_t id) {
  if (c >= id) fail(Errc::residue_out_of_range, "residue " + std::to_string(c) + " >= modulus");
  return 2 * (id - c) + 1 < id;
}

std::size_t deis_capacity(const ImageShare& share, const SisKeyMatrix& key) {
  check_geometry(share, key);
  std::size_t count = 0;
  for (int x = 0; x < share.residues.rows(); ++x) {
    for (int y = 0; y < share.residues.cols(); ++y) {
      if (deis_embeddable(share.residues(x, y), key.primes(x, y))) ++count;
    }
  }
  return count;
}

DeisResult deis_embed(const ImageShare& share, const SisKeyMatrix& key, const BitVec& payload,
                      const KeyStream& ks) {
  check_geometry(share, key);
  if (!key.pristine()) fail(Errc::key_not_pristine, "key matrix already carries skip labels");
  if (share.role == ShareRole::deis_marked)
    fail(Errc::role_mismatch, "share is already DE-IS marked");

  DeisResult out;
  out.marked = share;
  out.labeled_key = key;

  std::size_t bit_index = 0;
  for (int x = 0; x < share.residues.rows(); ++x) {
    for (int y = 0; y < share.residues.cols(); ++y) {
      const std::uint32_t c = share.residues(x, y);
      const std::uint32_t id = key.primes(x, y);
      if (deis_embeddable(c, id) && bit_index < payload.size()) {
        const int encrypted = ks.bit(bit_index) ^ payload[bit_index];
        out.marked.residues(x, y) =
            static_cast<std::uint16_t>(2 * (id - c) + static_cast<std::uint32_t>(encrypted));
        ++bit_index;
      } else {
        out.labeled_key.primes(x, y) = static_cast<std::uint16_t>(id - 1);
      }
    }
  }

  out.embedded_count = static_cast<std::uint32_t>(bit_index);
  out.marked.role = ShareRole::deis_marked;
  out.marked.deis_base = share.role;
  out.marked.deis_embedded_count = out.embedded_count;
  return out;
}

BitVec deis_extract(const ImageShare& marked, const SisKeyMatrix& labeled_key,
                    const KeyStream& ks) {
  check_geometry(marked, labeled_key);
  if (marked.role != ShareRole::deis_marked)
    fail(Errc::role_mismatch, "share is not DE-IS marked");

  BitVec payload;
  std::size_t bit_index = 0;
  for (int x = 0; x < marked.residues.rows(); ++x) {
    for (int y = 0; y < marked.residues.cols(); ++y) {
      if (labeled_key.primes(x, y) % 2 == 0) continue;
      const int encrypted = marked.residues(x, y) & 1;
      payload.push_back(static_cast<std::uint8_t>(ks.bit(bit_index) ^ encrypted));
      ++bit_index;
    }
  }
  return payload;
}

DeisRecovered deis_recover(const ImageShare& marked, const SisKeyMatrix& labeled_key) {
  check_geometry(marked, labeled_key);
  if (marked.role != ShareRole::deis_marked)
    fail(Errc::role_mismatch, "share is not DE-IS marked");

  DeisRecovered out;
  out.share = marked;
  out.key = labeled_key;
  for (int x = 0; x < marked.residues.rows(); ++x) {
    for (int y = 0; y < marked.residues.cols(); ++y) {
      const std::uint32_t entry = labeled_key.primes(x, y);
      if (entry % 2 == 0) {
        out.key.primes(x, y) = static_cast<std::uint16_t>(entry + 1);
      } else {
        out.share.residues(x, y) =
            static_cast<std::uint16_t>(entry - (marked.residues(x, y) >> 1));
      }
    }
  }
  out.share.role = marked.deis_base;
  out.share.deis_base = ShareRole::plain;
  out.share.deis_embedded_count = 0;
  return out;
}

}  // namespace crtsis
