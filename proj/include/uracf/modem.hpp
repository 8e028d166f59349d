#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace uracf {

using cplx = std::complex<double>;

/// QPSK symbols drawn from {√(P_d/2)·(±1±j)}.
struct SymbolVector {
  std::vector<cplx> values;
  double power = 0.0;  ///< P_d; |values[t]|² == power for every t
};

/// Bit pair (b_{2t}, b_{2t+1}) → √(P_d/2)·((1−2b_{2t}) + j(1−2b_{2t+1})).
/// Pre: |bits| even; throws otherwise.
SymbolVector qpsk_modulate(const std::vector<std::uint8_t>& bits, double P_d);

/// LLR_{2t} = 2√2·Re(ĉ_t)/noise_scale, LLR_{2t+1} = 2√2·Im(ĉ_t)/noise_scale.
/// Positive LLR ⇒ bit 0. Pre: noise_scale > 0; throws otherwise.
std::vector<double> qpsk_llr(const std::vector<cplx>& symbol_estimates, double noise_scale);

}  // namespace uracf
