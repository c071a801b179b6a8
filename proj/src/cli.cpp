#include "crtsis/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crtsis/deis.hpp"
#include "crtsis/io.hpp"
#include "crtsis/metrics.hpp"

namespace crtsis {
namespace {

constexpr int kExitUsage = 2;
constexpr int kExitThreshold = 3;
constexpr int kExitFormat = 4;
constexpr int kExitConsistency = 5;

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::insufficient_shares:
      return kExitThreshold;
    case Errc::malformed_pgm:
    case Errc::unsupported_maxval:
    case Errc::bad_magic:
    case Errc::version_mismatch:
    case Errc::truncated_file:
    case Errc::header_inconsistent:
    case Errc::io_failure:
      return kExitFormat;
    default:
      return kExitConsistency;
  }
}

std::string share_path(const std::string& dir, int shareholder) {
  return dir + "/share_" + std::to_string(shareholder) + ".crds";
}

std::string key_path(const std::string& dir, int shareholder) {
  return dir + "/key_" + std::to_string(shareholder) + ".crky";
}

// Reads share/key pairs and aligns them by shareholder index.
struct LoadedSet {
  std::vector<ImageShare> shares;
  std::vector<SisKeyMatrix> keys;
};

LoadedSet load_aligned(const std::vector<std::string>& share_paths,
                       const std::vector<std::string>& key_paths, const SisParams& params) {
  if (share_paths.size() != key_paths.size())
    fail(Errc::dimension_mismatch, "need exactly one key per share");

  LoadedSet set;
  for (const std::string& path : share_paths) set.shares.push_back(read_share(path, params));
  std::vector<SisKeyMatrix> keys;
  for (const std::string& path : key_paths) keys.push_back(read_key(path, params));

  std::sort(set.shares.begin(), set.shares.end(),
            [](const ImageShare& a, const ImageShare& b) {
              return a.shareholder_index < b.shareholder_index;
            });
  for (const ImageShare& share : set.shares) {
    const auto it = std::find_if(keys.begin(), keys.end(), [&](const SisKeyMatrix& k) {
      return k.shareholder_index == share.shareholder_index;
    });
    if (it == keys.end())
      fail(Errc::dimension_mismatch,
           "no key for shareholder " + std::to_string(share.shareholder_index));
    set.keys.push_back(*it);
  }
  return set;
}

BitVec payload_prefix(const std::string& path, std::int64_t bit_count) {
  BitVec bits = read_payload_bits(path);
  if (bit_count >= 0) {
    if (static_cast<std::size_t>(bit_count) > bits.size())
      fail(Errc::payload_too_large, "payload file holds fewer bits than requested");
    bits.resize(static_cast<std::size_t>(bit_count));
  }
  return bits;
}

std::string format_double(double v, int precision) {
  if (std::isinf(v)) return "inf";
  std::ostringstream out;
  out << std::fixed << std::setprecision(precision) << v;
  return out.str();
}

int do_keygen(const std::string& out_dir, const SisParams& params, int height, int width,
              std::uint64_t seed) {
  std::filesystem::create_directories(out_dir);
  write_params(out_dir + "/params.json", params);

  const std::vector<SisKeyMatrix> keys =
      gen_sis_keys(params, height, width, derive_seed(seed, 'K', 0));
  for (const SisKeyMatrix& key : keys)
    write_key(key_path(out_dir, key.shareholder_index), key, params);

  const PublicRandomness randomness =
      gen_public_randomness(params, height, width, derive_seed(seed, 'R', 0));
  write_randomness(out_dir + "/randomness.crpr", randomness, params);
  return 0;
}

int do_share(const std::string& image_path, const std::string& params_path,
             const std::string& randomness_path, const std::vector<std::string>& key_paths,
             std::uint16_t h_fid, std::uint64_t scramble_seed, const std::string& out_dir) {
  const SisParams params = read_params(params_path);
  if (key_paths.size() != static_cast<std::size_t>(params.n))
    fail(Errc::dimension_mismatch, "sharing needs all n key files");

  std::vector<SisKeyMatrix> keys;
  for (const std::string& path : key_paths) keys.push_back(read_key(path, params));
  std::sort(keys.begin(), keys.end(), [](const SisKeyMatrix& a, const SisKeyMatrix& b) {
    return a.shareholder_index < b.shareholder_index;
  });

  const PixelMatrix image = read_pgm(image_path);
  const PublicRandomness randomness = read_randomness(randomness_path, params);

  auto [pre, side] = preprocess_image(image, h_fid, scramble_seed);
  const std::vector<ImageShare> shares = share_image(pre, keys, randomness, params);

  std::filesystem::create_directories(out_dir);
  for (const ImageShare& share : shares)
    write_share(share_path(out_dir, share.shareholder_index), share, params);
  write_side_info(out_dir + "/sideinfo.crsi", side, params);
  return 0;
}

int do_hde_embed(const std::string& params_path, const std::string& side_path,
                 const std::vector<std::string>& share_paths,
                 const std::vector<std::string>& key_paths, const std::string& payload_path,
                 std::int64_t bit_count, const std::string& out_dir) {
  const SisParams params = read_params(params_path);
  LoadedSet set = load_aligned(share_paths, key_paths, params);
  SideInfo side = read_side_info(side_path, params);
  const BitVec payload = payload_prefix(payload_path, bit_count);

  const std::vector<ImageShare> marked = hde_embed(set.shares, set.keys, params, side, payload);

  std::filesystem::create_directories(out_dir);
  for (const ImageShare& share : marked)
    write_share(share_path(out_dir, share.shareholder_index), share, params);
  write_side_info(out_dir + "/sideinfo.crsi", side, params);
  return 0;
}

int do_reconstruct(const std::string& params_path, const std::string& side_path,
                   const std::vector<std::string>& share_paths,
                   const std::vector<std::string>& key_paths, const std::string& out_path) {
  const SisParams params = read_params(params_path);
  const LoadedSet set = load_aligned(share_paths, key_paths, params);
  const SideInfo side = read_side_info(side_path, params);
  const PixelMatrix image = reconstruct_image(set.shares, set.keys, params, side);
  write_pgm(out_path, image);
  return 0;
}

int do_hde_extract(const std::string& params_path, const std::string& side_path,
                   const std::string& image_path, const std::string& payload_out,
                   const std::string& restored_out) {
  const SisParams params = read_params(params_path);
  const SideInfo side = read_side_info(side_path, params);
  const PixelMatrix marked = read_pgm(image_path);
  const auto [bits, restored] = hde_extract_restore(marked, side);
  write_payload_bits(payload_out, bits);
  write_pgm(restored_out, restored);
  return 0;
}

int do_deis_embed(const std::string& params_path, const std::string& share_in,
                  const std::string& key_in, const std::string& payload_path,
                  std::int64_t bit_count, std::uint64_t seed, const std::string& share_out,
                  const std::string& key_out) {
  const SisParams params = read_params(params_path);
  const ImageShare share = read_share(share_in, params);
  const SisKeyMatrix key = read_key(key_in, params);
  BitVec payload = payload_prefix(payload_path, bit_count);
  const std::size_t capacity = deis_capacity(share, key);
  if (payload.size() > capacity) payload.resize(capacity);

  const DeisResult result = deis_embed(share, key, payload, KeyStream(seed));
  write_share(share_out, result.marked, params);
  write_key(key_out, result.labeled_key, params);
  std::cout << "embedded " << result.embedded_count << " bits\n";
  return 0;
}

int do_deis_extract(const std::string& params_path, const std::string& share_in,
                    const std::string& key_in, std::uint64_t seed,
                    const std::string& payload_out) {
  const SisParams params = read_params(params_path);
  const ImageShare share = read_share(share_in, params);
  const SisKeyMatrix key = read_key(key_in, params);
  write_payload_bits(payload_out, deis_extract(share, key, KeyStream(seed)));
  return 0;
}

int do_deis_recover(const std::string& params_path, const std::string& share_in,
                    const std::string& key_in, const std::string& share_out,
                    const std::string& key_out) {
  const SisParams params = read_params(params_path);
  const ImageShare share = read_share(share_in, params);
  const SisKeyMatrix key = read_key(key_in, params);
  const DeisRecovered recovered = deis_recover(share, key);
  write_share(share_out, recovered.share, params);
  write_key(key_out, recovered.key, params);
  return 0;
}

int do_metrics(const std::string& params_path, const std::vector<std::string>& image_paths,
               std::uint16_t h_fid, std::uint64_t seed, int samples, const std::string& out_path) {
  const SisParams params = read_params(params_path);

  std::ostringstream csv;
  csv << "image,psnr1,ec1,ec2,er_deis,entropy_before,entropy_after,corr_h,corr_v,corr_d\n";

  for (std::size_t img_idx = 0; img_idx < image_paths.size(); ++img_idx) {
    const PixelMatrix image = read_pgm(image_paths[img_idx]);
    const int height = static_cast<int>(image.rows());
    const int width = static_cast<int>(image.cols());
    const std::uint64_t image_seed = derive_seed(seed, 'M', img_idx);

    const std::vector<SisKeyMatrix> keys =
        gen_sis_keys(params, height, width, derive_seed(image_seed, 'K', 0));
    const PublicRandomness randomness =
        gen_public_randomness(params, height, width, derive_seed(image_seed, 'R', 0));

    auto [pre, side] = preprocess_image(image, h_fid, derive_seed(image_seed, 'S', 0));
    const std::vector<ImageShare> shares = share_image(pre, keys, randomness, params);

    // HDE at maximum capacity, then the marked reconstruction quality.
    const std::size_t ec1 = count_available_pairs(side.availability);
    SplitMix64 payload_rng(derive_seed(image_seed, 'P', 0));
    BitVec payload(ec1);
    for (std::uint8_t& bit : payload) bit = static_cast<std::uint8_t>(payload_rng.next_bit());
    SideInfo marked_side = side;
    const std::vector<ImageShare> marked = hde_embed(shares, keys, params, marked_side, payload);
    const PixelMatrix marked_image = reconstruct_image(marked, keys, params, marked_side);
    const double psnr1 = psnr(image, marked_image);

    // DE-IS at maximum capacity on every plain share.
    std::uint64_t ec2_total = 0;
    double entropy_before = 0.0, entropy_after = 0.0;
    double corr_sum[3] = {0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < shares.size(); ++i) {
      const std::size_t capacity = deis_capacity(shares[i], keys[i]);
      SplitMix64 bits_rng(derive_seed(image_seed, 'B', i));
      BitVec deis_payload(capacity);
      for (std::uint8_t& bit : deis_payload)
        bit = static_cast<std::uint8_t>(bits_rng.next_bit());
      const DeisResult result =
          deis_embed(shares[i], keys[i], deis_payload, KeyStream(derive_seed(image_seed, 'D', i)));

      ec2_total += result.embedded_count;
      entropy_before += entropy(shares[i].residues);
      entropy_after += entropy(result.marked.residues);
      const Direction dirs[3] = {Direction::horizontal, Direction::vertical,
                                 Direction::diagonal};
      for (int d = 0; d < 3; ++d) {
        corr_sum[d] += adjacent_correlation(result.marked.residues, dirs[d], samples,
                                            derive_seed(image_seed, 'C', i * 3 + static_cast<std::size_t>(d)))
                           .value;
      }
    }
    const double n = static_cast<double>(shares.size());
    const EmbeddingRates rates =
        embedding_rates(ec2_total, params.n, height, width, params.w);

    csv << std::filesystem::path(image_paths[img_idx]).stem().string() << ","
        << format_double(psnr1, 4) << "," << ec1 << "," << ec2_total << ","
        << format_double(rates.rate, 6) << "," << format_double(entropy_before / n, 4) << ","
        << format_double(entropy_after / n, 4) << "," << format_double(corr_sum[0] / n, 6) << ","
        << format_double(corr_sum[1] / n, 6) << "," << format_double(corr_sum[2] / n, 6) << "\n";
  }

  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(out_path, std::ios::trunc);
    if (!out) fail(Errc::io_failure, "cannot open " + out_path + " for writing");
    out << csv.str();
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"CRT threshold secret-image sharing with reversible data hiding"};
  app.require_subcommand(1);

  // keygen
  auto* keygen = app.add_subcommand("keygen", "emit parameter, key, and randomizer files");
  int kg_w = 8, kg_t = 5, kg_n = 7;
  std::uint32_t kg_q0 = 257;
  std::vector<std::uint32_t> kg_pool = {457, 461, 463, 467, 479, 487, 491, 499, 503, 509};
  int kg_height = 512, kg_width = 512;
  std::uint64_t kg_seed = 1;
  std::string kg_out = ".";
  keygen->add_option("--w", kg_w, "plaintext bit width");
  keygen->add_option("--t", kg_t, "reconstruction threshold");
  keygen->add_option("--n", kg_n, "shareholder count");
  keygen->add_option("--q0", kg_q0, "reconstruction prime");
  keygen->add_option("--pool", kg_pool, "sharing prime pool, ascending");
  keygen->add_option("--height", kg_height, "image height");
  keygen->add_option("--width", kg_width, "image width");
  keygen->add_option("--seed", kg_seed, "key generation seed");
  keygen->add_option("--out-dir", kg_out, "output directory");

  // share
  auto* share = app.add_subcommand("share", "split an image into n shares plus side info");
  std::string sh_image, sh_params, sh_randomness, sh_out = ".";
  std::vector<std::string> sh_keys;
  std::uint16_t sh_hfid = kHfidInfinity;
  std::uint64_t sh_scramble = 1;
  share->add_option("--image", sh_image, "input PGM")->required();
  share->add_option("--params", sh_params, "parameter file")->required();
  share->add_option("--randomness", sh_randomness, "public randomizer file")->required();
  share->add_option("--key", sh_keys, "key file, one per shareholder")->required();
  share->add_option("--hfid", sh_hfid, "fidelity limit (65535 = unlimited)");
  share->add_option("--scramble-seed", sh_scramble, "pair scramble seed");
  share->add_option("--out-dir", sh_out, "output directory");

  // hde-embed
  auto* hde = app.add_subcommand("hde-embed", "embed a payload homomorphically into all shares");
  std::string he_params, he_side, he_payload, he_out = ".";
  std::vector<std::string> he_shares, he_keys;
  std::int64_t he_bits = -1;
  hde->add_option("--params", he_params, "parameter file")->required();
  hde->add_option("--side", he_side, "side info file")->required();
  hde->add_option("--share", he_shares, "plain share files")->required();
  hde->add_option("--key", he_keys, "key files")->required();
  hde->add_option("--payload", he_payload, "payload file")->required();
  hde->add_option("--bits", he_bits, "payload bit count (default: whole file)");
  hde->add_option("--out-dir", he_out, "output directory");

  // reconstruct
  auto* rec = app.add_subcommand("reconstruct", "rebuild the image from at least t shares");
  std::string rc_params, rc_side, rc_out;
  std::vector<std::string> rc_shares, rc_keys;
  rec->add_option("--params", rc_params, "parameter file")->required();
  rec->add_option("--side", rc_side, "side info file")->required();
  rec->add_option("--share", rc_shares, "share files")->required();
  rec->add_option("--key", rc_keys, "key files")->required();
  rec->add_option("--out", rc_out, "output PGM")->required();

  // hde-extract
  auto* hex = app.add_subcommand("hde-extract", "extract the payload and restore the image");
  std::string hx_params, hx_side, hx_image, hx_payload, hx_restored;
  hex->add_option("--params", hx_params, "parameter file")->required();
  hex->add_option("--side", hx_side, "side info file")->required();
  hex->add_option("--image", hx_image, "reconstructed marked PGM")->required();
  hex->add_option("--payload-out", hx_payload, "extracted payload file")->required();
  hex->add_option("--restored-out", hx_restored, "restored PGM")->required();

  // deis-embed
  auto* dem = app.add_subcommand("deis-embed", "embed a payload into one share");
  std::string de_params, de_share, de_key, de_payload, de_share_out, de_key_out;
  std::int64_t de_bits = -1;
  std::uint64_t de_seed = 1;
  dem->add_option("--params", de_params, "parameter file")->required();
  dem->add_option("--share", de_share, "share file")->required();
  dem->add_option("--key", de_key, "pristine key file")->required();
  dem->add_option("--payload", de_payload, "payload file")->required();
  dem->add_option("--bits", de_bits, "payload bit count (default: as much as fits)");
  dem->add_option("--seed", de_seed, "data-hiding keystream seed");
  dem->add_option("--share-out", de_share_out, "marked share file")->required();
  dem->add_option("--key-out", de_key_out, "labeled key file")->required();

  // deis-extract
  auto* dex = app.add_subcommand("deis-extract", "extract a payload from a marked share");
  std::string dx_params, dx_share, dx_key, dx_payload;
  std::uint64_t dx_seed = 1;
  dex->add_option("--params", dx_params, "parameter file")->required();
  dex->add_option("--share", dx_share, "marked share file")->required();
  dex->add_option("--key", dx_key, "labeled key file")->required();
  dex->add_option("--seed", dx_seed, "data-hiding keystream seed");
  dex->add_option("--payload-out", dx_payload, "extracted payload file")->required();

  // deis-recover
  auto* der = app.add_subcommand("deis-recover", "restore the pre-embed share and key");
  std::string dr_params, dr_share, dr_key, dr_share_out, dr_key_out;
  der->add_option("--params", dr_params, "parameter file")->required();
  der->add_option("--share", dr_share, "marked share file")->required();
  der->add_option("--key", dr_key, "labeled key file")->required();
  der->add_option("--share-out", dr_share_out, "recovered share file")->required();
  der->add_option("--key-out", dr_key_out, "pristine key file")->required();

  // metrics
  auto* met = app.add_subcommand("metrics", "run the measurement pipeline, emit CSV");
  std::string mt_params, mt_out;
  std::vector<std::string> mt_images;
  std::uint16_t mt_hfid = 10;
  std::uint64_t mt_seed = 1;
  int mt_samples = 2000;
  met->add_option("--params", mt_params, "parameter file")->required();
  met->add_option("--image", mt_images, "input PGM, repeatable")->required();
  met->add_option("--hfid", mt_hfid, "fidelity limit for HDE");
  met->add_option("--seed", mt_seed, "master seed for the pipeline runs");
  met->add_option("--samples", mt_samples, "correlation sample count");
  met->add_option("--out", mt_out, "CSV output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (keygen->parsed())
      return do_keygen(kg_out, validate_params(kg_w, kg_t, kg_n, kg_q0, kg_pool), kg_height,
                       kg_width, kg_seed);
    if (share->parsed())
      return do_share(sh_image, sh_params, sh_randomness, sh_keys, sh_hfid, sh_scramble, sh_out);
    if (hde->parsed())
      return do_hde_embed(he_params, he_side, he_shares, he_keys, he_payload, he_bits, he_out);
    if (rec->parsed()) return do_reconstruct(rc_params, rc_side, rc_shares, rc_keys, rc_out);
    if (hex->parsed()) return do_hde_extract(hx_params, hx_side, hx_image, hx_payload, hx_restored);
    if (dem->parsed())
      return do_deis_embed(de_params, de_share, de_key, de_payload, de_bits, de_seed, de_share_out,
                           de_key_out);
    if (dex->parsed()) return do_deis_extract(dx_params, dx_share, dx_key, dx_seed, dx_payload);
    if (der->parsed()) return do_deis_recover(dr_params, dr_share, dr_key, dr_share_out, dr_key_out);
    if (met->parsed())
      return do_metrics(mt_params, mt_images, mt_hfid, mt_seed, mt_samples, mt_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConsistency;
  }
  return kExitUsage;
}

}  // namespace crtsis
