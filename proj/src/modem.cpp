#include "uracf/modem.hpp"

#include <cmath>
#include <stdexcept>

namespace uracf {

SymbolVector qpsk_modulate(const std::vector<std::uint8_t>& bits, double P_d) {
  if (bits.size() % 2 != 0) throw std::invalid_argument("qpsk_modulate: |bits| must be even");
  const double amp = std::sqrt(P_d / 2.0);
  SymbolVector out;
  out.power = P_d;
  out.values.reserve(bits.size() / 2);
  for (std::size_t t = 0; t < bits.size(); t += 2)
    out.values.emplace_back(amp * (1.0 - 2.0 * bits[t]), amp * (1.0 - 2.0 * bits[t + 1]));
  return out;
}

std::vector<double> qpsk_llr(const std::vector<cplx>& symbol_estimates, double noise_scale) {
  if (!(noise_scale > 0.0)) throw std::invalid_argument("qpsk_llr: noise_scale must be > 0");
  const double c = 2.0 * std::sqrt(2.0) / noise_scale;
  std::vector<double> llrs;
  llrs.reserve(2 * symbol_estimates.size());
  for (const cplx& s : symbol_estimates) {
    llrs.push_back(c * s.real());
    llrs.push_back(c * s.imag());
  }
  return llrs;
}

}  // namespace uracf
