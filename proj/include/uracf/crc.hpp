#pragma once

#include <cstdint>
#include <vector>

#include "uracf/config.hpp"

namespace uracf {

/// Bit-serial CRC over bit sequences (not bytes). `reflect = false` processes
/// input bits as given with an MSB-first register and appends check bits MSB
/// first; `reflect = true` runs the reflected-register algorithm, i.e. the
/// input bit sequence is interpreted as LSB-first transmission order and check
/// bits are appended LSB first. width = 0 denotes the empty CRC (always passes).
struct CrcSpec {
  int width = 16;
  std::uint64_t poly = 0x1021;  ///< x^16+x^12+x^5+1
  std::uint64_t init = 0;
  std::uint64_t xorout = 0;
  bool reflect = false;

  static CrcSpec from_config(const SystemConfig& cfg) {
    return CrcSpec{cfg.r, cfg.crc_poly, cfg.crc_init, cfg.crc_xorout, cfg.crc_reflect};
  }
};

/// Check value of `bits` under `crc` (low `width` bits of the return value).
std::uint64_t crc_remainder(const std::vector<std::uint8_t>& bits, const CrcSpec& crc);

/// payload ∥ width check bits.
std::vector<std::uint8_t> crc_attach(const std::vector<std::uint8_t>& payload, const CrcSpec& crc);

/// True iff the trailing width bits equal the CRC of the leading bits.
/// Pre: |bits| ≥ width.
bool crc_check(const std::vector<std::uint8_t>& bits, const CrcSpec& crc);

}  // namespace uracf
