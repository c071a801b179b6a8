#ifndef CRTSIS_IO_HPP
#define CRTSIS_IO_HPP

#include <cstdint>
#include <string>

#include "crtsis/crt.hpp"
#include "crtsis/keying.hpp"
#include "crtsis/pipeline.hpp"
#include "crtsis/types.hpp"

// Binary container formats. Every file opens with a 26-byte little-endian
// header:
//
//   magic[4]  version u8  role u8  shareholder u16  t u16  n u16  q0 u16
//   w u16  height u32  width u32  prng_id u8  flags u8
//
// magic is "CRDS" for shares, "CRKY" for keys, "CRPR" for the public
// randomizer, "CRSI" for side info. Share bodies are row-major u16 residues
// (DE-IS marked shares prepend a u32 embedded-bit count and set flags bit 0
// when the base share was HDE-marked). Key bodies are row-major u16 entries.
// Randomizer bodies are row-major u64 entries. Side info packs the
// availability bits MSB-first, row-major, then a u64 scramble seed, a u16
// fidelity limit (0xFFFF meaning unlimited) and a u32 payload bit count.
// Payload files are raw bytes consumed MSB-first. Parameters travel as JSON.

namespace crtsis {

PixelMatrix read_pgm(const std::string& path);
void write_pgm(const std::string& path, const PixelMatrix& image);

ImageShare read_share(const std::string& path, const SisParams& params);
void write_share(const std::string& path, const ImageShare& share, const SisParams& params);

SisKeyMatrix read_key(const std::string& path, const SisParams& params);
void write_key(const std::string& path, const SisKeyMatrix& key, const SisParams& params);

PublicRandomness read_randomness(const std::string& path, const SisParams& params);
void write_randomness(const std::string& path, const PublicRandomness& randomness,
                      const SisParams& params);

SideInfo read_side_info(const std::string& path, const SisParams& params);
void write_side_info(const std::string& path, const SideInfo& side, const SisParams& params);

SisParams read_params(const std::string& path);
void write_params(const std::string& path, const SisParams& params);

BitVec read_payload_bits(const std::string& path);
void write_payload_bits(const std::string& path, const BitVec& bits);

}  // namespace crtsis

#endif  // CRTSIS_IO_HPP
