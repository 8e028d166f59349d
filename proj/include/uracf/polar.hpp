#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uracf/crc.hpp"

namespace uracf {

/// A polar code instance: u-vector positions in info_set carry information
/// bits, everything else is frozen to zero.
struct PolarCodeSpec {
  int n_c = 1024;             ///< code length, power of two
  int k = 104;                ///< info bits including CRC
  std::vector<int> info_set;  ///< sorted ascending, size k
};

/// Parses a reliability-sequence file (one integer per line) and verifies it
/// is a permutation of 0..1023. Throws std::runtime_error otherwise.
std::vector<int> load_reliability_sequence(const std::string& path);

/// The packaged 1024-entry universal reliability sequence, ascending
/// reliability (entry 0 = least reliable bit-channel). Loaded once.
const std::vector<int>& reliability_sequence();

/// Picks the k most reliable bit-channel indices among those < n_c.
/// Pre: n_c a power of two, n_c ≤ 1024, 0 ≤ k ≤ n_c; throws otherwise.
PolarCodeSpec construct_info_set(int n_c, int k);
PolarCodeSpec construct_info_set(int n_c, int k, const std::vector<int>& sequence);

/// x = u·F^{⊗m} in natural order (no bit reversal); |info_bits| must be k.
std::vector<std::uint8_t> polar_encode(const std::vector<std::uint8_t>& info_bits,
                                       const PolarCodeSpec& spec);

/// CRC-aided successive-cancellation list decoding. LLR sign convention:
/// positive ⇒ bit 0 more likely. Among the final paths that pass the CRC,
/// returns the k − width payload bits of the best-metric path; std::nullopt
/// if no path passes.
std::optional<std::vector<std::uint8_t>> scl_decode(const std::vector<double>& llrs,
                                                    const PolarCodeSpec& spec,
                                                    const CrcSpec& crc, int L_list);

}  // namespace uracf
