#include "uracf/crc.hpp"

#include <stdexcept>

namespace uracf {
namespace {

std::uint64_t low_mask(int width) {
  return width >= 64 ? ~0ULL : (1ULL << width) - 1ULL;
}

std::uint64_t reflect_bits(std::uint64_t v, int width) {
  std::uint64_t out = 0;
  for (int i = 0; i < width; ++i)
    if ((v >> i) & 1ULL) out |= 1ULL << (width - 1 - i);
  return out;
}

}  // namespace

std::uint64_t crc_remainder(const std::vector<std::uint8_t>& bits, const CrcSpec& crc) {
  if (crc.width < 0 || crc.width > 64)
    throw std::invalid_argument("crc_remainder: width must be in [0, 64]");
  if (crc.width == 0) return 0;

  const std::uint64_t mask = low_mask(crc.width);
  std::uint64_t reg;
  if (crc.reflect) {
    reg = reflect_bits(crc.init & mask, crc.width);
    const std::uint64_t poly_r = reflect_bits(crc.poly & mask, crc.width);
    for (const std::uint8_t b : bits) {
      const std::uint64_t fb = (reg ^ b) & 1ULL;
      reg >>= 1;
      if (fb) reg ^= poly_r;
    }
  } else {
    reg = crc.init & mask;
    const std::uint64_t top = 1ULL << (crc.width - 1);
    for (const std::uint8_t b : bits) {
      const std::uint64_t fb = ((reg & top) ? 1ULL : 0ULL) ^ b;
      reg = (reg << 1) & mask;
      if (fb) reg ^= crc.poly & mask;
    }
  }
  return (reg ^ crc.xorout) & mask;
}

std::vector<std::uint8_t> crc_attach(const std::vector<std::uint8_t>& payload, const CrcSpec& crc) {
  const std::uint64_t check = crc_remainder(payload, crc);
  std::vector<std::uint8_t> out = payload;
  out.reserve(payload.size() + crc.width);
  for (int i = 0; i < crc.width; ++i) {
    const int shift = crc.reflect ? i : crc.width - 1 - i;
    out.push_back(static_cast<std::uint8_t>((check >> shift) & 1ULL));
  }
  return out;
}

bool crc_check(const std::vector<std::uint8_t>& bits, const CrcSpec& crc) {
  if (crc.width == 0) return true;
  if (bits.size() < static_cast<std::size_t>(crc.width))
    throw std::invalid_argument("crc_check: fewer bits than the CRC width");
  const std::vector<std::uint8_t> payload(bits.begin(), bits.end() - crc.width);
  const std::uint64_t check = crc_remainder(payload, crc);
  for (int i = 0; i < crc.width; ++i) {
    const int shift = crc.reflect ? i : crc.width - 1 - i;
    if (bits[bits.size() - crc.width + i] != ((check >> shift) & 1ULL)) return false;
  }
  return true;
}

}  // namespace uracf
