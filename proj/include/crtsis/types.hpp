#ifndef CRTSIS_TYPES_HPP
#define CRTSIS_TYPES_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace crtsis {

// Dense row-major storage for all image-shaped data. Pixels are 8-bit,
// residues / key primes / preprocessed values fit in 16 bits (moduli are
// below 2^{w+1} with w <= 15), randomizers need the full 64 bits.
using PixelMatrix = Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ValueMatrix = Eigen::Array<std::uint16_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RandomizerMatrix =
    Eigen::Array<std::uint64_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using BitMatrix = Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using BitVec = std::vector<std::uint8_t>;  // one bit per element, values 0/1

using uint128 = unsigned __int128;

enum class ShareRole : std::uint8_t {
  plain = 0,
  hde_marked = 1,
  deis_marked = 2,
};

enum class Errc {
  // parameter validation
  not_prime,
  pool_out_of_range,
  threshold_condition_violated,
  pool_too_small,
  params_too_large,
  // scalar sharing
  value_out_of_range,
  randomizer_out_of_range,
  duplicate_modulus,
  insufficient_shares,
  inconsistent_shares,
  modulus_mismatch,
  // keying
  subset_condition_violated,
  // plaintext difference expansion
  not_available,
  overflowed_pair,
  // pipeline
  odd_width,
  dimension_mismatch,
  labeled_key,
  payload_too_large,
  role_mismatch,
  mixed_roles,
  side_info_mismatch,
  // share-domain difference expansion
  residue_out_of_range,
  key_not_pristine,
  // file formats
  malformed_pgm,
  unsupported_maxval,
  bad_magic,
  version_mismatch,
  truncated_file,
  header_inconsistent,
  io_failure,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace crtsis

#endif  // CRTSIS_TYPES_HPP
