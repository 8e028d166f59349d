#pragma once

#include <Eigen/Dense>

#include "uracf/codebook.hpp"
#include "uracf/config.hpp"
#include "uracf/crc.hpp"
#include "uracf/modem.hpp"
#include "uracf/polar.hpp"

namespace uracf {

/// One active user's transmit-side artifacts. signal[0..n_p) is the pilot
/// column; the data part is zero except for the n_d pattern positions.
struct UserFrame {
  Message message;
  long pilot_index = -1;
  std::vector<int> pattern;     ///< active data-part indices, ascending
  SymbolVector codeword_symbols;
  Eigen::VectorXcd signal;      ///< length n = n_p + data slots
};

/// Pilot from the first B_p bits; remaining B_c bits CRC-attached, polar
/// encoded, QPSK modulated, and placed on the pilot's pattern positions in
/// increasing order.
UserFrame encode_user(const Message& message, const PilotCodebook& codebook,
                      const PatternMatrix& patterns, const PolarCodeSpec& polar,
                      const CrcSpec& crc, double P_d);

}  // namespace uracf
