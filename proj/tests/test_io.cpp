#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "crtsis/io.hpp"

using namespace crtsis;
namespace fs = std::filesystem;

namespace {

SisParams reference_params() {
  return validate_params(8, 5, 7, 257, {457, 461, 463, 467, 479, 487, 491, 499, 503, 509});
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("crtsis_io_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::vector<std::uint8_t> file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void patch_byte(const std::string& path, std::size_t offset, std::uint8_t value) {
  auto bytes = file_bytes(path);
  bytes.at(offset) = value;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

ImageShare sample_share(const SisParams& params, std::uint64_t seed) {
  const auto keys = gen_sis_keys(params, 6, 8, seed);
  const auto randomness = gen_public_randomness(params, 6, 8, seed + 1);
  PreprocessedImage pre;
  pre.values = ValueMatrix::Constant(6, 8, 100);
  return share_image(pre, keys, randomness, params)[0];
}

}  // namespace

TEST_CASE("PGM round trip and known bytes") {
  TempDir dir;
  PixelMatrix img(2, 2);
  img << 0, 127, 128, 255;
  write_pgm(dir.file("a.pgm"), img);
  const PixelMatrix back = read_pgm(dir.file("a.pgm"));
  CHECK((back == img).all());

  // hand-written file with a comment line
  {
    std::ofstream out(dir.file("b.pgm"), std::ios::binary);
    out << "P5\n# comment\n2 2\n255\n";
    const char data[4] = {10, 20, 30, 40};
    out.write(data, 4);
  }
  const PixelMatrix b = read_pgm(dir.file("b.pgm"));
  CHECK(b(0, 0) == 10);
  CHECK(b(1, 1) == 40);
}

TEST_CASE("PGM rejects other formats and depths") {
  TempDir dir;
  {
    std::ofstream out(dir.file("p4.pbm"), std::ios::binary);
    out << "P4\n2 2\n";
  }
  CHECK_THROWS_AS((void)read_pgm(dir.file("p4.pbm")), Error);

  {
    std::ofstream out(dir.file("deep.pgm"), std::ios::binary);
    out << "P5\n2 2\n65535\n";
    out.write("\0\0\0\0\0\0\0\0", 8);
  }
  try {
    (void)read_pgm(dir.file("deep.pgm"));
    FAIL("expected refusal");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::unsupported_maxval);
  }

  {
    std::ofstream out(dir.file("short.pgm"), std::ios::binary);
    out << "P5\n4 4\n255\n";
    out.write("xy", 2);
  }
  CHECK_THROWS_AS((void)read_pgm(dir.file("short.pgm")), Error);
}

TEST_CASE("share serialization is a fixpoint") {
  TempDir dir;
  const SisParams params = reference_params();
  const ImageShare share = sample_share(params, 8);

  write_share(dir.file("s1.crds"), share, params);
  const ImageShare back = read_share(dir.file("s1.crds"), params);
  CHECK(back.role == share.role);
  CHECK(back.shareholder_index == share.shareholder_index);
  CHECK((back.residues == share.residues).all());

  write_share(dir.file("s2.crds"), back, params);
  CHECK(file_bytes(dir.file("s1.crds")) == file_bytes(dir.file("s2.crds")));
}

TEST_CASE("DE-IS share headers carry the base role and the embedded count") {
  TempDir dir;
  const SisParams params = reference_params();
  ImageShare share = sample_share(params, 9);
  share.role = ShareRole::deis_marked;
  share.deis_base = ShareRole::hde_marked;
  share.deis_embedded_count = 12345;

  write_share(dir.file("d.crds"), share, params);
  const ImageShare back = read_share(dir.file("d.crds"), params);
  CHECK(back.role == ShareRole::deis_marked);
  CHECK(back.deis_base == ShareRole::hde_marked);
  CHECK(back.deis_embedded_count == 12345);
}

TEST_CASE("key, randomness, and side info round trips") {
  TempDir dir;
  const SisParams params = reference_params();
  const auto keys = gen_sis_keys(params, 6, 8, 4);
  const auto randomness = gen_public_randomness(params, 6, 8, 5);

  write_key(dir.file("k.crky"), keys[2], params);
  const SisKeyMatrix key_back = read_key(dir.file("k.crky"), params);
  CHECK(key_back.shareholder_index == 3);
  CHECK((key_back.primes == keys[2].primes).all());

  SisKeyMatrix labeled = keys[2];
  labeled.primes(1, 1) = static_cast<std::uint16_t>(labeled.primes(1, 1) - 1);
  write_key(dir.file("kl.crky"), labeled, params);
  const SisKeyMatrix labeled_back = read_key(dir.file("kl.crky"), params);
  CHECK_FALSE(labeled_back.pristine());
  CHECK((labeled_back.primes == labeled.primes).all());

  write_randomness(dir.file("r.crpr"), randomness, params);
  const PublicRandomness r_back = read_randomness(dir.file("r.crpr"), params);
  CHECK((r_back.r == randomness.r).all());

  PixelMatrix img(6, 8);
  img.setConstant(77);
  img(0, 0) = 200;
  auto [pre, side] = preprocess_image(img, 10, 0xabcd);
  side.payload_length = 7;
  write_side_info(dir.file("si.crsi"), side, params);
  const SideInfo side_back = read_side_info(dir.file("si.crsi"), params);
  CHECK((side_back.availability == side.availability).all());
  CHECK(side_back.scramble_seed == side.scramble_seed);
  CHECK(side_back.h_fid == side.h_fid);
  CHECK(side_back.payload_length == side.payload_length);

  write_side_info(dir.file("si2.crsi"), side_back, params);
  CHECK(file_bytes(dir.file("si.crsi")) == file_bytes(dir.file("si2.crsi")));

  write_key(dir.file("k2.crky"), key_back, params);
  CHECK(file_bytes(dir.file("k.crky")) == file_bytes(dir.file("k2.crky")));
  write_randomness(dir.file("r2.crpr"), r_back, params);
  CHECK(file_bytes(dir.file("r.crpr")) == file_bytes(dir.file("r2.crpr")));
}

TEST_CASE("format violations are named precisely") {
  TempDir dir;
  const SisParams params = reference_params();
  const ImageShare share = sample_share(params, 10);
  write_share(dir.file("s.crds"), share, params);

  // share file opened as a key file
  try {
    (void)read_key(dir.file("s.crds"), params);
    FAIL("expected refusal");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::bad_magic);
  }

  // future version byte
  patch_byte(dir.file("s.crds"), 4, 9);
  try {
    (void)read_share(dir.file("s.crds"), params);
    FAIL("expected refusal");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::version_mismatch);
  }
  patch_byte(dir.file("s.crds"), 4, 1);

  // truncation
  {
    const auto bytes = file_bytes(dir.file("s.crds"));
    std::ofstream out(dir.file("cut.crds"), std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size() - 5));
  }
  try {
    (void)read_share(dir.file("cut.crds"), params);
    FAIL("expected refusal");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::truncated_file);
  }

  // residues must stay below 2^{w+1}
  ImageShare bad = share;
  bad.residues(0, 0) = 512;
  try {
    write_share(dir.file("bad.crds"), bad, params);
    FAIL("expected refusal");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::header_inconsistent);
  }

  // header parameters must match the parameter file
  SisParams other = validate_params(8, 2, 3, 257, {457, 461, 463});
  try {
    (void)read_share(dir.file("s.crds"), other);
    FAIL("expected refusal");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::header_inconsistent);
  }
}

TEST_CASE("parameter files round trip through validation") {
  TempDir dir;
  const SisParams params = reference_params();
  write_params(dir.file("p.json"), params);
  const SisParams back = read_params(dir.file("p.json"));
  CHECK(back.w == params.w);
  CHECK(back.t == params.t);
  CHECK(back.n == params.n);
  CHECK(back.q0 == params.q0);
  CHECK(back.pool == params.pool);
  CHECK(back.u == params.u);
  CHECK(back.r_bound == params.r_bound);

  {
    std::ofstream out(dir.file("junk.json"));
    out << "{\"w\": 8}";
  }
  CHECK_THROWS_AS((void)read_params(dir.file("junk.json")), Error);
}

TEST_CASE("payload bits are MSB-first per byte") {
  TempDir dir;
  {
    std::ofstream out(dir.file("p.bin"), std::ios::binary);
    const unsigned char byte = 0xA5;
    out.write(reinterpret_cast<const char*>(&byte), 1);
  }
  const BitVec bits = read_payload_bits(dir.file("p.bin"));
  CHECK(bits == BitVec{1, 0, 1, 0, 0, 1, 0, 1});

  write_payload_bits(dir.file("q.bin"), bits);
  CHECK(file_bytes(dir.file("q.bin")) == std::vector<std::uint8_t>{0xA5});

  // unaligned lengths pad with zeros
  write_payload_bits(dir.file("r.bin"), BitVec{1, 1, 1});
  CHECK(file_bytes(dir.file("r.bin")) == std::vector<std::uint8_t>{0xE0});
}
