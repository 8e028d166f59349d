#include "uracf/cpu_combine.hpp"

#include <stdexcept>

#include "uracf/modem.hpp"
#include "uracf/tx_chain.hpp"

namespace uracf {

std::map<long, Eigen::VectorXcd> combine_symbols(const std::vector<ApSymbolReport>& per_ap) {
  std::map<long, Eigen::VectorXcd> sum;
  std::map<long, int> count;
  for (const auto& ap : per_ap) {
    const auto& detected = *ap.detected;
    const auto& C = *ap.C_hat;
    if (C.cols() != static_cast<Eigen::Index>(detected.size()))
      throw std::invalid_argument("combine_symbols: C_hat column count != |detected|");
    for (std::size_t u = 0; u < detected.size(); ++u) {
      auto [it, fresh] = sum.try_emplace(detected[u], C.col(u));
      if (!fresh) it->second += C.col(u);
      ++count[detected[u]];
    }
  }
  for (auto& [pilot, vec] : sum) vec /= static_cast<double>(count[pilot]);
  return sum;
}

std::vector<std::uint8_t> assemble_message(long pilot_index, int B_p,
                                           const std::vector<std::uint8_t>& payload) {
  std::vector<std::uint8_t> bits = index_to_bits(pilot_index, B_p);
  bits.insert(bits.end(), payload.begin(), payload.end());
  return bits;
}

std::vector<DecodedEntry> decode_round(const std::map<long, Eigen::VectorXcd>& combined,
                                       const PolarCodeSpec& polar, const CrcSpec& crc, int L_list,
                                       int iteration, const DecodedSet& already) {
  std::vector<DecodedEntry> fresh;
  for (const auto& [pilot, symbols] : combined) {
    if (already.pilots.count(pilot)) continue;
    // Level-2: no CSI at the CPU, so LLRs are proportional (scale 1); SCL
    // ranking is invariant under the common positive factor.
    const auto llrs = qpsk_llr({symbols.data(), symbols.data() + symbols.size()}, 1.0);
    auto payload = scl_decode(llrs, polar, crc, L_list);
    if (!payload) continue;
    fresh.push_back({pilot, std::move(*payload), iteration});
  }
  return fresh;
}

TrialResult run_decoding_loop(std::vector<ApState>& ap_states, const SystemModel& model,
                              const std::vector<Message>& sent, CoopMode mode) {
  const SystemConfig& cfg = *model.cfg;
  const long N = model.codebook->N();
  const int n_p = model.codebook->n_p();
  const bool use_r0_cache = model.gram != nullptr;

  DecodedSet decoded;
  std::vector<char> excluded(N, 0);
  TrialResult result;

  for (int iter = 1; iter <= cfg.n_dec; ++iter) {
    // AP stage: joint pilot detection/channel estimation, symbol estimation.
    for (auto& ap : ap_states) {
      const auto Y_p = ap.Y_resid.topRows(n_p);
      const auto omp = omp_detect(Y_p, *model.codebook, cfg.K_m, cfg.sigma2, model.gram,
                                  use_r0_cache ? &ap.R0 : nullptr, &excluded);
      ap.detected = omp.detected;
      ap.G_hat = omp.G_hat;
      std::vector<const std::vector<int>*> pats;
      pats.reserve(ap.detected.size());
      for (const long idx : ap.detected) pats.push_back(&model.patterns->active_indices[idx]);
      ap.C_hat = lmmse_symbols(ap.Y_resid.bottomRows(ap.Y_resid.rows() - n_p), ap.G_hat,
                               cfg.sigma2, cfg.P_d, pats);
    }

    // CPU stage.
    std::vector<DecodedEntry> fresh;
    if (mode == CoopMode::kCooperative) {
      std::vector<ApSymbolReport> reports;
      reports.reserve(ap_states.size());
      for (const auto& ap : ap_states) reports.push_back({&ap.detected, &ap.C_hat});
      fresh = decode_round(combine_symbols(reports), *model.polar, *model.crc, cfg.L_list, iter,
                           decoded);
    } else {
      for (const auto& ap : ap_states) {
        auto part = decode_round(combine_symbols({{&ap.detected, &ap.C_hat}}), *model.polar,
                                 *model.crc, cfg.L_list, iter, decoded);
        for (auto& e : part) {
          decoded.pilots.insert(e.pilot_index);  // later APs skip this pilot
          fresh.push_back(std::move(e));
        }
      }
    }

    result.iterations_used = iter;
    result.per_iteration_decoded.push_back(static_cast<int>(fresh.size()));
    if (fresh.empty()) break;

    // Broadcast: rebuild frames, SIC at every AP, finalize bookkeeping.
    std::vector<UserFrame> frames;
    frames.reserve(fresh.size());
    std::vector<std::pair<long, const Eigen::VectorXcd*>> sic_frames;
    for (const auto& e : fresh) {
      Message msg;
      msg.bits = assemble_message(e.pilot_index, cfg.B_p, e.payload);
      frames.push_back(
          encode_user(msg, *model.codebook, *model.patterns, *model.polar, *model.crc, cfg.P_d));
    }
    for (std::size_t i = 0; i < fresh.size(); ++i)
      sic_frames.emplace_back(fresh[i].pilot_index, &frames[i].signal);

    for (auto& ap : ap_states) {
      sic_subtract(ap.Y_resid, sic_frames, ap.G_hat, ap.detected);
      if (!use_r0_cache) continue;
      // Keep the cached correlation in sync: the pilot part of a rebuilt
      // frame is exactly the codebook column, so A^H·(a_p·ĝ) = Gram_p·ĝ.
      for (const auto& [pilot, signal] : sic_frames) {
        for (std::size_t u = 0; u < ap.detected.size(); ++u) {
          if (ap.detected[u] != pilot) continue;
          if (model.gram->is_real)
            ap.R0.noalias() -= model.gram->real.col(pilot).cast<cplx>() * ap.G_hat.row(u);
          else
            ap.R0.noalias() -= model.gram->cx.col(pilot) * ap.G_hat.row(u);
          break;
        }
      }
    }

    for (auto& e : fresh) {
      decoded.pilots.insert(e.pilot_index);
      excluded[e.pilot_index] = 1;
      decoded.output_list.insert(assemble_message(e.pilot_index, cfg.B_p, e.payload));
      decoded.entries.push_back(std::move(e));
    }
  }

  // Misdetections per sent message instance, false alarms as
  // decoded messages no active user transmitted.
  result.decoded = decoded.output_list;
  std::set<std::vector<std::uint8_t>> sent_set;
  for (const auto& m : sent) sent_set.insert(m.bits);
  for (const auto& m : sent)
    if (!decoded.output_list.count(m.bits)) ++result.n_md;
  for (const auto& l : decoded.output_list)
    if (!sent_set.count(l)) ++result.n_fa;
  return result;
}

}  // namespace uracf
