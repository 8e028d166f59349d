#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uracf/channel.hpp"
#include "uracf/cpu_combine.hpp"
#include "uracf/config.hpp"
#include "uracf/tx_chain.hpp"

namespace uracf {

inline constexpr const char* kVersionString = "uracf-v1.0.0";

/// Everything derived from a SystemConfig that is reusable across trials:
/// codebooks, polar construction, CRC parameters, and (optionally) the pilot
/// Gram. Immutable during trials; rescale_powers supports power sweeps
/// without regenerating the codebook.
struct SimulationContext {
  SystemConfig cfg;
  PilotCodebook codebook;
  PatternMatrix patterns;
  PolarCodeSpec polar;
  CrcSpec crc;
  PilotGram gram;
  bool has_gram = false;

  SystemModel model() const {
    SystemModel m;
    m.cfg = &cfg;
    m.codebook = &codebook;
    m.patterns = &patterns;
    m.polar = &polar;
    m.crc = &crc;
    m.gram = has_gram ? &gram : nullptr;
    return m;
  }

  /// P_p ← f·P_p, P_d ← f·P_d, A ← √f·A, Gram ← f·Gram (self-consistent).
  void rescale_powers(double factor);
};

SimulationContext make_context(const SystemConfig& cfg, bool build_gram = true);

/// One full Monte Carlo trial: random messages → frames → topology → channel
/// → AWGN → decoding loop. Deterministic in (config, trial_index).
TrialResult run_trial(const SimulationContext& ctx, std::uint64_t trial_index,
                      CoopMode mode = CoopMode::kCooperative);
TrialResult run_trial(const SystemConfig& cfg, std::uint64_t trial_index);

struct PupeEstimate {
  double p_md = 0.0;
  double p_fa = 0.0;
  double p_e = 0.0;  ///< p_md + p_fa
  int trials = 0;
  double std_err = 0.0;  ///< sample standard error of per-trial p_e
};

/// p_md = mean(n_md/K_a); p_fa = mean(n_fa/|L|), 0 when the list is empty.
PupeEstimate estimate_pupe(const SimulationContext& ctx, int n_trials,
                           CoopMode mode = CoopMode::kCooperative);
PupeEstimate estimate_pupe(const SystemConfig& cfg, int n_trials);

struct SweepPoint {
  double sweep_value = 0.0;
  PupeEstimate est;
  std::uint64_t config_hash = 0;
};

struct SweepResult {
  std::string sweep_name;  ///< e.g. "K_a"
  std::string label;       ///< series label, e.g. "cooperative"
  SystemConfig base;
  std::vector<SweepPoint> points;
};

SweepResult sweep_ka(const SystemConfig& base, const std::vector<int>& ka_values, int trials,
                     CoopMode mode, const std::string& label);

/// Transmit-referenced energy per bit over noise: (n_p·P_p + n_d·P_d)/(B·σ²).
double ebn0_linear(const SystemConfig& cfg);
double ebn0_db(const SystemConfig& cfg);

struct Ebn0Point {
  double sweep_value = 0.0;  ///< K_a
  bool feasible = false;
  double ebn0_db = 0.0;   ///< at the found operating point
  double P_p = 0.0;       ///< operating pilot power, watts
  double P_d = 0.0;       ///< operating data power, watts
  double sigma2 = 0.0;
  double p_e = 0.0;       ///< measured PUPE at the operating point
  int trials = 0;
};

struct Ebn0Result {
  std::string label;
  SystemConfig base;
  double target_pupe = 0.05;
  std::vector<Ebn0Point> points;
};

/// Bisection on a joint (P_p, P_d) scale until p_e crosses target_pupe;
/// 0.25 dB tolerance. The bracket [lo_scale, hi_scale] multiplies the
/// config's powers and is widened a few times if the crossing lies outside;
/// still-unreachable targets are reported infeasible. `ctx` is rescaled in
/// place during the search and restored to its entry scale afterwards.
Ebn0Point required_ebn0(SimulationContext& ctx, double target_pupe, int trials, CoopMode mode,
                        double lo_scale = 1e-3, double hi_scale = 1.0);

Ebn0Result ebn0_sweep(const SystemConfig& base, const std::vector<int>& ka_values,
                      double target_pupe, int trials, CoopMode mode, const std::string& label);

/// CSV + JSON manifest + SVG under out_dir with the given file stem.
void emit_results(const SweepResult& result, const std::string& out_dir, const std::string& stem);
void emit_results(const Ebn0Result& result, const std::string& out_dir, const std::string& stem);

/// Topology/β debug dump for one trial (CSV: AP rows, user rows, β matrix).
void dump_environment(const SimulationContext& ctx, std::uint64_t trial_index,
                      const std::string& out_dir, const std::string& stem);

}  // namespace uracf
