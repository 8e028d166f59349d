#include "uracf/tx_chain.hpp"

#include <stdexcept>

namespace uracf {

UserFrame encode_user(const Message& message, const PilotCodebook& codebook,
                      const PatternMatrix& patterns, const PolarCodeSpec& polar,
                      const CrcSpec& crc, double P_d) {
  const long N = codebook.N();
  int B_p = 0;
  while ((1L << B_p) < N) ++B_p;
  if ((1L << B_p) != N || patterns.N() != N)
    throw std::invalid_argument("encode_user: codebook/pattern column count must be 2^B_p");
  const int B = static_cast<int>(message.bits.size());
  const int B_c = B - B_p;
  if (B_c <= 0) throw std::invalid_argument("encode_user: message shorter than B_p bits");
  if (polar.k != B_c + crc.width)
    throw std::invalid_argument("encode_user: polar k != B_c + CRC width");
  if (patterns.n_d != polar.n_c / 2)
    throw std::invalid_argument("encode_user: pattern weight != n_c/2 QPSK symbols");

  UserFrame frame;
  frame.message = message;
  frame.pilot_index =
      bits_to_index({message.bits.begin(), message.bits.begin() + B_p});

  const std::vector<std::uint8_t> payload(message.bits.begin() + B_p, message.bits.end());
  const auto codeword = polar_encode(crc_attach(payload, crc), polar);
  frame.codeword_symbols = qpsk_modulate(codeword, P_d);
  frame.pattern = patterns.active_indices[frame.pilot_index];

  const int n_p = codebook.n_p();
  frame.signal = Eigen::VectorXcd::Zero(n_p + patterns.n_data_slots());
  frame.signal.head(n_p) = codebook.A.col(frame.pilot_index);
  for (std::size_t t = 0; t < frame.pattern.size(); ++t)
    frame.signal(n_p + frame.pattern[t]) = frame.codeword_symbols.values[t];
  return frame;
}

}  // namespace uracf
