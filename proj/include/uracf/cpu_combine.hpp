#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "uracf/ap_receiver.hpp"
#include "uracf/codebook.hpp"
#include "uracf/config.hpp"
#include "uracf/polar.hpp"

namespace uracf {

enum class CoopMode {
  kCooperative,    ///< Level-2: CPU combines symbol estimates across APs
  kNoCooperation,  ///< each AP decodes alone; output lists are unioned
};

/// Immutable per-run bundle every receiver-side stage reads from.
struct SystemModel {
  const SystemConfig* cfg = nullptr;
  const PilotCodebook* codebook = nullptr;
  const PatternMatrix* patterns = nullptr;
  const PolarCodeSpec* polar = nullptr;
  const CrcSpec* crc = nullptr;
  const PilotGram* gram = nullptr;  ///< optional
};

/// Mutable per-AP receiver state across decoding iterations.
struct ApState {
  Eigen::MatrixXcd Y_resid;      ///< n × M_r residual received signal
  Eigen::MatrixXcd R0;           ///< N × M_r cached A^H·Y_p of the residual (optional)
  std::vector<long> detected;    ///< Î_m of the current iteration, ≤ K_m
  Eigen::MatrixXcd G_hat;        ///< |detected| × M_r
  Eigen::MatrixXcd C_hat;        ///< n_d × |detected|
};

struct DecodedEntry {
  long pilot_index = -1;
  std::vector<std::uint8_t> payload;  ///< B_c bits
  int iteration = 0;
};

/// Messages recovered so far. A pilot index decoded once is final.
struct DecodedSet {
  std::vector<DecodedEntry> entries;
  std::set<long> pilots;
  std::set<std::vector<std::uint8_t>> output_list;  ///< full B-bit messages
};

struct ApSymbolReport {
  const std::vector<long>* detected = nullptr;
  const Eigen::MatrixXcd* C_hat = nullptr;
};

/// For each pilot index detected by ≥1 AP, the mean of the matching
/// C_hat columns over exactly the APs that detected it.
std::map<long, Eigen::VectorXcd> combine_symbols(const std::vector<ApSymbolReport>& per_ap);

/// Decodes every combined pilot index not already in `already`; an entry is
/// produced only when some SCL path passes the CRC.
std::vector<DecodedEntry> decode_round(const std::map<long, Eigen::VectorXcd>& combined,
                                       const PolarCodeSpec& polar, const CrcSpec& crc, int L_list,
                                       int iteration, const DecodedSet& already);

std::vector<std::uint8_t> assemble_message(long pilot_index, int B_p,
                                           const std::vector<std::uint8_t>& payload);

/// Full receiver: per-iteration OMP + LMMSE per AP, CPU combining/decoding,
/// SIC broadcast; stops early on an iteration with zero new decodes.
/// ap_states must hold the raw received signals (R0 filled if gram is used).
TrialResult run_decoding_loop(std::vector<ApState>& ap_states, const SystemModel& model,
                              const std::vector<Message>& sent, CoopMode mode);

}  // namespace uracf
