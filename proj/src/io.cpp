#include "crtsis/io.hpp"

#include <cctype>
#include <cstring>
#include <fstream>
#include <vector>

#include <json.hpp>

namespace crtsis {
namespace {

constexpr std::uint8_t kFormatVersion = 1;
constexpr std::size_t kHeaderSize = 26;
constexpr std::uint8_t kFlagDeisOverHde = 0x01;

const char kMagicShare[4] = {'C', 'R', 'D', 'S'};
const char kMagicKey[4] = {'C', 'R', 'K', 'Y'};
const char kMagicRandomness[4] = {'C', 'R', 'P', 'R'};
const char kMagicSideInfo[4] = {'C', 'R', 'S', 'I'};

struct Header {
  char magic[4] = {0, 0, 0, 0};
  std::uint8_t version = kFormatVersion;
  std::uint8_t role = 0;
  std::uint16_t shareholder_index = 0;
  std::uint16_t t = 0;
  std::uint16_t n = 0;
  std::uint16_t q0 = 0;
  std::uint16_t w = 0;
  std::uint32_t height = 0;
  std::uint32_t width = 0;
  std::uint8_t prng_id = kPrngSplitMix64;
  std::uint8_t flags = 0;
};

class Writer {
 public:
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u16(std::uint16_t v) {
    u8(static_cast<std::uint8_t>(v));
    u8(static_cast<std::uint8_t>(v >> 8));
  }
  void u32(std::uint32_t v) {
    u16(static_cast<std::uint16_t>(v));
    u16(static_cast<std::uint16_t>(v >> 16));
  }
  void u64(std::uint64_t v) {
    u32(static_cast<std::uint32_t>(v));
    u32(static_cast<std::uint32_t>(v >> 32));
  }
  void raw(const char* data, std::size_t size) {
    bytes_.insert(bytes_.end(), data, data + size);
  }
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }

 private:
  std::vector<std::uint8_t> bytes_;
};

class Reader {
 public:
  explicit Reader(std::vector<std::uint8_t> bytes) : bytes_(std::move(bytes)) {}

  std::uint8_t u8() {
    need(1);
    return bytes_[pos_++];
  }
  std::uint16_t u16() {
    const std::uint16_t lo = u8();
    return static_cast<std::uint16_t>(lo | (static_cast<std::uint16_t>(u8()) << 8));
  }
  std::uint32_t u32() {
    const std::uint32_t lo = u16();
    return lo | (static_cast<std::uint32_t>(u16()) << 16);
  }
  std::uint64_t u64() {
    const std::uint64_t lo = u32();
    return lo | (static_cast<std::uint64_t>(u32()) << 32);
  }
  void raw(char* out, std::size_t size) {
    need(size);
    std::memcpy(out, bytes_.data() + pos_, size);
    pos_ += size;
  }
  bool exhausted() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t size) {
    if (pos_ + size > bytes_.size()) fail(Errc::truncated_file, "file ends inside a record");
  }

  std::vector<std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::vector<std::uint8_t> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io_failure, "cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return bytes;
}

void spill(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::io_failure, "cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(Errc::io_failure, "short write to " + path);
}

void put_header(Writer& w, const Header& h) {
  w.raw(h.magic, 4);
  w.u8(h.version);
  w.u8(h.role);
  w.u16(h.shareholder_index);
  w.u16(h.t);
  w.u16(h.n);
  w.u16(h.q0);
  w.u16(h.w);
  w.u32(h.height);
  w.u32(h.width);
  w.u8(h.prng_id);
  w.u8(h.flags);
}

Header get_header(Reader& r, const char expected_magic[4]) {
  Header h;
  r.raw(h.magic, 4);
  if (std::memcmp(h.magic, expected_magic, 4) != 0)
    fail(Errc::bad_magic, std::string("expected magic ") + std::string(expected_magic, 4));
  h.version = r.u8();
  if (h.version != kFormatVersion)
    fail(Errc::version_mismatch, "unsupported format version " + std::to_string(h.version));
  h.role = r.u8();
  h.shareholder_index = r.u16();
  h.t = r.u16();
  h.n = r.u16();
  h.q0 = r.u16();
  h.w = r.u16();
  h.height = r.u32();
  h.width = r.u32();
  h.prng_id = r.u8();
  h.flags = r.u8();
  return h;
}

Header make_header(const char magic[4], const SisParams& params, std::uint32_t height,
                   std::uint32_t width) {
  Header h;
  std::memcpy(h.magic, magic, 4);
  h.t = static_cast<std::uint16_t>(params.t);
  h.n = static_cast<std::uint16_t>(params.n);
  h.q0 = static_cast<std::uint16_t>(params.q0);
  h.w = static_cast<std::uint16_t>(params.w);
  h.height = height;
  h.width = width;
  return h;
}

void check_header_params(const Header& h, const SisParams& params) {
  if (h.t != params.t || h.n != params.n || h.q0 != params.q0 || h.w != params.w)
    fail(Errc::header_inconsistent, "header parameters disagree with the parameter file");
  if (h.prng_id != kPrngSplitMix64)
    fail(Errc::header_inconsistent, "unknown PRNG id " + std::to_string(h.prng_id));
  if (h.height == 0 || h.width == 0 || h.width % 2 != 0)
    fail(Errc::header_inconsistent, "degenerate image dimensions");
}

std::uint32_t value_ceiling(const SisParams& params) { return 1u << (params.w + 1); }

}  // namespace

PixelMatrix read_pgm(const std::string& path) {
  const std::vector<std::uint8_t> bytes = slurp(path);
  std::size_t pos = 0;

  const auto next_token = [&]() -> std::string {
    for (;;) {
      while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
      if (pos < bytes.size() && bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        continue;
      }
      break;
    }
    std::string token;
    while (pos < bytes.size() && !std::isspace(bytes[pos]))
      token.push_back(static_cast<char>(bytes[pos++]));
    if (token.empty()) fail(Errc::malformed_pgm, "unexpected end of PGM header");
    return token;
  };

  if (next_token() != "P5") fail(Errc::malformed_pgm, "not a binary PGM (P5) file");
  long width = 0, height = 0, maxval = 0;
  try {
    width = std::stol(next_token());
    height = std::stol(next_token());
    maxval = std::stol(next_token());
  } catch (const std::exception&) {
    fail(Errc::malformed_pgm, "non-numeric PGM header field");
  }
  if (width <= 0 || height <= 0) fail(Errc::malformed_pgm, "non-positive PGM dimensions");
  if (maxval != 255) fail(Errc::unsupported_maxval, "PGM maxval must be 255");
  ++pos;  // single whitespace byte after maxval

  const std::size_t expected = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() < pos || bytes.size() - pos < expected)
    fail(Errc::malformed_pgm, "PGM pixel data truncated");

  PixelMatrix image(height, width);
  for (long x = 0; x < height; ++x) {
    for (long y = 0; y < width; ++y) {
      image(x, y) = bytes[pos++];
    }
  }
  return image;
}

void write_pgm(const std::string& path, const PixelMatrix& image) {
  Writer w;
  const std::string header = "P5\n" + std::to_string(image.cols()) + " " +
                             std::to_string(image.rows()) + "\n255\n";
  w.raw(header.data(), header.size());
  for (int x = 0; x < image.rows(); ++x) {
    for (int y = 0; y < image.cols(); ++y) w.u8(image(x, y));
  }
  spill(path, w.bytes());
}

ImageShare read_share(const std::string& path, const SisParams& params) {
  Reader r(slurp(path));
  const Header h = get_header(r, kMagicShare);
  check_header_params(h, params);
  if (h.role > 2) fail(Errc::header_inconsistent, "unknown share role");
  if (h.shareholder_index < 1 || h.shareholder_index > params.n)
    fail(Errc::header_inconsistent, "shareholder index out of range");

  ImageShare share;
  share.role = static_cast<ShareRole>(h.role);
  share.shareholder_index = h.shareholder_index;
  if (share.role == ShareRole::deis_marked) {
    share.deis_base = (h.flags & kFlagDeisOverHde) ? ShareRole::hde_marked : ShareRole::plain;
    share.deis_embedded_count = r.u32();
  }
  share.residues.resize(h.height, h.width);
  const std::uint32_t ceiling = value_ceiling(params);
  for (std::uint32_t x = 0; x < h.height; ++x) {
    for (std::uint32_t y = 0; y < h.width; ++y) {
      const std::uint16_t v = r.u16();
      if (v >= ceiling) fail(Errc::header_inconsistent, "residue exceeds 2^{w+1}");
      share.residues(x, y) = v;
    }
  }
  if (!r.exhausted()) fail(Errc::header_inconsistent, "trailing bytes after share body");
  return share;
}

void write_share(const std::string& path, const ImageShare& share, const SisParams& params) {
  Header h = make_header(kMagicShare, params, static_cast<std::uint32_t>(share.residues.rows()),
                         static_cast<std::uint32_t>(share.residues.cols()));
  h.role = static_cast<std::uint8_t>(share.role);
  h.shareholder_index = static_cast<std::uint16_t>(share.shareholder_index);
  if (share.role == ShareRole::deis_marked && share.deis_base == ShareRole::hde_marked)
    h.flags |= kFlagDeisOverHde;

  Writer w;
  put_header(w, h);
  if (share.role == ShareRole::deis_marked) w.u32(share.deis_embedded_count);
  const std::uint32_t ceiling = value_ceiling(params);
  for (int x = 0; x < share.residues.rows(); ++x) {
    for (int y = 0; y < share.residues.cols(); ++y) {
      if (share.residues(x, y) >= ceiling)
        fail(Errc::header_inconsistent, "residue exceeds 2^{w+1}");
      w.u16(share.residues(x, y));
    }
  }
  spill(path, w.bytes());
}

SisKeyMatrix read_key(const std::string& path, const SisParams& params) {
  Reader r(slurp(path));
  const Header h = get_header(r, kMagicKey);
  check_header_params(h, params);
  if (h.role > 1) fail(Errc::header_inconsistent, "unknown key role");
  if (h.shareholder_index < 1 || h.shareholder_index > params.n)
    fail(Errc::header_inconsistent, "shareholder index out of range");

  SisKeyMatrix key;
  key.shareholder_index = h.shareholder_index;
  key.primes.resize(h.height, h.width);
  bool any_even = false;
  const std::uint32_t ceiling = value_ceiling(params);
  for (std::uint32_t x = 0; x < h.height; ++x) {
    for (std::uint32_t y = 0; y < h.width; ++y) {
      const std::uint16_t v = r.u16();
      if (v >= ceiling) fail(Errc::header_inconsistent, "key entry exceeds 2^{w+1}");
      any_even = any_even || (v % 2 == 0);
      key.primes(x, y) = v;
    }
  }
  if (!r.exhausted()) fail(Errc::header_inconsistent, "trailing bytes after key body");
  const bool labeled_role = h.role == 1;
  if (labeled_role != any_even)
    fail(Errc::header_inconsistent, "key role flag disagrees with entry parities");
  return key;
}

void write_key(const std::string& path, const SisKeyMatrix& key, const SisParams& params) {
  Header h = make_header(kMagicKey, params, static_cast<std::uint32_t>(key.primes.rows()),
                         static_cast<std::uint32_t>(key.primes.cols()));
  h.role = key.pristine() ? 0 : 1;
  h.shareholder_index = static_cast<std::uint16_t>(key.shareholder_index);

  Writer w;
  put_header(w, h);
  const std::uint32_t ceiling = value_ceiling(params);
  for (int x = 0; x < key.primes.rows(); ++x) {
    for (int y = 0; y < key.primes.cols(); ++y) {
      if (key.primes(x, y) >= ceiling)
        fail(Errc::header_inconsistent, "key entry exceeds 2^{w+1}");
      w.u16(key.primes(x, y));
    }
  }
  spill(path, w.bytes());
}

PublicRandomness read_randomness(const std::string& path, const SisParams& params) {
  Reader r(slurp(path));
  const Header h = get_header(r, kMagicRandomness);
  check_header_params(h, params);

  PublicRandomness pub;
  pub.r.resize(h.height, h.width);
  for (std::uint32_t x = 0; x < h.height; ++x) {
    for (std::uint32_t y = 0; y < h.width; ++y) {
      const std::uint64_t v = r.u64();
      if (v >= params.r_bound) fail(Errc::header_inconsistent, "randomizer entry exceeds bound");
      pub.r(x, y) = v;
    }
  }
  if (!r.exhausted()) fail(Errc::header_inconsistent, "trailing bytes after randomizer body");
  return pub;
}

void write_randomness(const std::string& path, const PublicRandomness& randomness,
                      const SisParams& params) {
  const Header h =
      make_header(kMagicRandomness, params, static_cast<std::uint32_t>(randomness.r.rows()),
                  static_cast<std::uint32_t>(randomness.r.cols()));
  Writer w;
  put_header(w, h);
  for (int x = 0; x < randomness.r.rows(); ++x) {
    for (int y = 0; y < randomness.r.cols(); ++y) {
      if (randomness.r(x, y) >= params.r_bound)
        fail(Errc::header_inconsistent, "randomizer entry exceeds bound");
      w.u64(randomness.r(x, y));
    }
  }
  spill(path, w.bytes());
}

SideInfo read_side_info(const std::string& path, const SisParams& params) {
  Reader r(slurp(path));
  const Header h = get_header(r, kMagicSideInfo);
  check_header_params(h, params);

  SideInfo side;
  side.availability.resize(h.height, h.width);
  const std::size_t total = static_cast<std::size_t>(h.height) * h.width;
  std::uint8_t byte = 0;
  for (std::size_t i = 0; i < total; ++i) {
    if (i % 8 == 0) byte = r.u8();
    side.availability(static_cast<int>(i / h.width), static_cast<int>(i % h.width)) =
        (byte >> (7 - i % 8)) & 1;
  }
  side.scramble_seed = r.u64();
  side.h_fid = r.u16();
  side.payload_length = r.u32();
  if (!r.exhausted()) fail(Errc::header_inconsistent, "trailing bytes after side info body");

  for (std::uint32_t x = 0; x < h.height; ++x) {
    for (std::uint32_t y = 0; y + 1 < h.width; y += 2) {
      if (side.availability(x, y) && side.availability(x, y + 1))
        fail(Errc::header_inconsistent, "both positions of a pair are flagged");
    }
  }
  return side;
}

void write_side_info(const std::string& path, const SideInfo& side, const SisParams& params) {
  const Header h =
      make_header(kMagicSideInfo, params, static_cast<std::uint32_t>(side.availability.rows()),
                  static_cast<std::uint32_t>(side.availability.cols()));
  Writer w;
  put_header(w, h);
  const std::size_t total = static_cast<std::size_t>(side.availability.size());
  std::uint8_t byte = 0;
  for (std::size_t i = 0; i < total; ++i) {
    const int bit = side.availability(static_cast<int>(i / h.width), static_cast<int>(i % h.width));
    byte = static_cast<std::uint8_t>(byte | ((bit & 1) << (7 - i % 8)));
    if (i % 8 == 7 || i + 1 == total) {
      w.u8(byte);
      byte = 0;
    }
  }
  w.u64(side.scramble_seed);
  w.u16(side.h_fid);
  w.u32(side.payload_length);
  spill(path, w.bytes());
}

SisParams read_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_failure, "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
    return validate_params(j.at("w").get<int>(), j.at("t").get<int>(), j.at("n").get<int>(),
                           j.at("q0").get<std::uint32_t>(),
                           j.at("pool").get<std::vector<std::uint32_t>>());
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::header_inconsistent, std::string("bad parameter file: ") + e.what());
  }
}

void write_params(const std::string& path, const SisParams& params) {
  nlohmann::json j;
  j["w"] = params.w;
  j["t"] = params.t;
  j["n"] = params.n;
  j["q0"] = params.q0;
  j["pool"] = params.pool;
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(Errc::io_failure, "cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
  if (!out) fail(Errc::io_failure, "short write to " + path);
}

BitVec read_payload_bits(const std::string& path) {
  const std::vector<std::uint8_t> bytes = slurp(path);
  BitVec bits;
  bits.reserve(bytes.size() * 8);
  for (const std::uint8_t byte : bytes) {
    for (int b = 7; b >= 0; --b) bits.push_back((byte >> b) & 1);
  }
  return bits;
}

void write_payload_bits(const std::string& path, const BitVec& bits) {
  std::vector<std::uint8_t> bytes((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    bytes[i / 8] = static_cast<std::uint8_t>(bytes[i / 8] | ((bits[i] & 1) << (7 - i % 8)));
  }
  spill(path, bytes);
}

}  // namespace crtsis
