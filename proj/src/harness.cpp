#include "uracf/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "uracf/seeding.hpp"
#include "uracf/svg_plot.hpp"

namespace uracf {
namespace {

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("emit_results: cannot open '" + path + "'");
  os << content;
  if (!os) throw std::runtime_error("emit_results: write failed for '" + path + "'");
}

std::string manifest_json(const SystemConfig& cfg, const std::string& kind,
                          const std::string& label, std::size_t n_points, double target_pupe) {
  nlohmann::ordered_json j;
  j["version"] = kVersionString;
  j["kind"] = kind;
  j["label"] = label;
  j["master_seed"] = cfg.master_seed;
  j["config_hash"] = hex64(config_hash(cfg));
  j["points"] = n_points;
  if (target_pupe > 0) j["target_pupe"] = target_pupe;
  j["config"] = nlohmann::ordered_json::parse(config_to_json(cfg));
  return j.dump(2) + "\n";
}

}  // namespace

void SimulationContext::rescale_powers(double factor) {
  if (!(factor > 0.0)) throw std::invalid_argument("rescale_powers: factor must be > 0");
  const double amp = std::sqrt(factor);
  cfg.P_p *= factor;
  cfg.P_d *= factor;
  codebook.P_p = cfg.P_p;
  codebook.A *= amp;
  if (codebook.real_entries) codebook.A_re *= amp;
  if (has_gram) gram.rescale(factor);
}

SimulationContext make_context(const SystemConfig& cfg, bool build_gram) {
  SimulationContext ctx;
  ctx.cfg = cfg;
  ctx.codebook = generate_pilot_codebook(derive_seed(cfg.master_seed, "pilot", 0), cfg.n_p,
                                         cfg.num_pilots(), cfg.P_p, cfg.complex_pilots);
  ctx.patterns = generate_pattern_matrix(derive_seed(cfg.master_seed, "pattern", 0),
                                         cfg.data_slots(), cfg.num_pilots(), cfg.n_d());
  ctx.polar = construct_info_set(cfg.n_c, cfg.k());
  ctx.crc = CrcSpec::from_config(cfg);
  if (build_gram) {
    ctx.gram = build_pilot_gram(ctx.codebook);
    ctx.has_gram = true;
  }
  return ctx;
}

TrialResult run_trial(const SimulationContext& ctx, std::uint64_t trial_index, CoopMode mode) {
  const SystemConfig& cfg = ctx.cfg;
  const std::uint64_t trial_seed = derive_seed(cfg.master_seed, "trial", trial_index);

  // Messages and frames.
  Rng msg_rng = make_rng(derive_seed(trial_seed, "messages", 0));
  std::uniform_int_distribution<int> coin(0, 1);
  std::vector<Message> sent(cfg.K_a);
  Eigen::MatrixXcd frames(cfg.K_a, cfg.n);
  for (int i = 0; i < cfg.K_a; ++i) {
    sent[i].bits.resize(cfg.B);
    for (auto& b : sent[i].bits) b = static_cast<std::uint8_t>(coin(msg_rng));
    sent[i].origin_user = i;
    const UserFrame frame =
        encode_user(sent[i], ctx.codebook, ctx.patterns, ctx.polar, ctx.crc, cfg.P_d);
    frames.row(i) = frame.signal.transpose();
  }

  // Environment.
  const Topology topo =
      build_topology(place_points(derive_seed(trial_seed, "aps", 0), cfg.M, cfg.D),
                     place_points(derive_seed(trial_seed, "users", 0), cfg.K_a, cfg.D));
  const ChannelRealization ch = make_channel(derive_seed(trial_seed, "channel", 0), topo,
                                             cfg.M_r, cfg.asd_deg, cfg.correlation_model);
  const auto Y = apply_channel(derive_seed(trial_seed, "noise", 0), frames, ch, cfg.sigma2);

  // Receiver.
  std::vector<ApState> aps(cfg.M);
  for (int m = 0; m < cfg.M; ++m) {
    aps[m].Y_resid = Y[m];
    if (ctx.has_gram) aps[m].R0 = pilot_correlate(ctx.codebook, Y[m].topRows(cfg.n_p));
  }
  return run_decoding_loop(aps, ctx.model(), sent, mode);
}

TrialResult run_trial(const SystemConfig& cfg, std::uint64_t trial_index) {
  return run_trial(make_context(cfg), trial_index, CoopMode::kCooperative);
}

PupeEstimate estimate_pupe(const SimulationContext& ctx, int n_trials, CoopMode mode) {
  if (n_trials < 1) throw std::invalid_argument("estimate_pupe: n_trials must be >= 1");
  PupeEstimate est;
  est.trials = n_trials;
  std::vector<double> per_md(n_trials, 0.0), per_fa(n_trials, 0.0), per_trial(n_trials, 0.0);
  // Trials own all their mutable state, so they run concurrently; aggregation
  // below is in index order, keeping results independent of scheduling.
  const auto run_range = [&](std::atomic<int>& next) {
    for (int t = next.fetch_add(1); t < n_trials; t = next.fetch_add(1)) {
      const TrialResult r = run_trial(ctx, static_cast<std::uint64_t>(t), mode);
      per_md[t] = static_cast<double>(r.n_md) / ctx.cfg.K_a;
      per_fa[t] = r.decoded.empty()
                      ? 0.0
                      : static_cast<double>(r.n_fa) / static_cast<double>(r.decoded.size());
      per_trial[t] = per_md[t] + per_fa[t];
    }
  };
  std::atomic<int> next{0};
  const int workers =
      std::max(1, std::min(n_trials, static_cast<int>(std::thread::hardware_concurrency())));
  if (workers == 1) {
    run_range(next);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back([&] { run_range(next); });
    for (auto& th : pool) th.join();
  }
  for (int t = 0; t < n_trials; ++t) {
    est.p_md += per_md[t];
    est.p_fa += per_fa[t];
  }
  est.p_md /= n_trials;
  est.p_fa /= n_trials;
  est.p_e = est.p_md + est.p_fa;
  if (n_trials > 1) {
    double ss = 0.0;
    for (const double x : per_trial) ss += (x - est.p_e) * (x - est.p_e);
    est.std_err = std::sqrt(ss / (n_trials - 1)) / std::sqrt(static_cast<double>(n_trials));
  }
  return est;
}

PupeEstimate estimate_pupe(const SystemConfig& cfg, int n_trials) {
  const SimulationContext ctx = make_context(cfg);
  return estimate_pupe(ctx, n_trials, CoopMode::kCooperative);
}

SweepResult sweep_ka(const SystemConfig& base, const std::vector<int>& ka_values, int trials,
                     CoopMode mode, const std::string& label) {
  SweepResult result;
  result.sweep_name = "K_a";
  result.label = label;
  result.base = base;
  SimulationContext ctx = make_context(base);
  for (const int ka : ka_values) {
    ctx.cfg.K_a = ka;  // codebooks are K_a-independent, so the context is reusable
    SweepPoint pt;
    pt.sweep_value = ka;
    pt.est = estimate_pupe(ctx, trials, mode);
    pt.config_hash = config_hash(ctx.cfg);
    result.points.push_back(pt);
  }
  return result;
}

double ebn0_linear(const SystemConfig& cfg) {
  return (cfg.n_p * cfg.P_p + cfg.n_d() * cfg.P_d) / (cfg.B * cfg.sigma2);
}

double ebn0_db(const SystemConfig& cfg) { return 10.0 * std::log10(ebn0_linear(cfg)); }

Ebn0Point required_ebn0(SimulationContext& ctx, double target_pupe, int trials, CoopMode mode,
                        double lo_scale, double hi_scale) {
  if (!(target_pupe > 0.0 && target_pupe < 1.0))
    throw std::invalid_argument("required_ebn0: target_pupe must be in (0,1)");
  if (!(lo_scale > 0.0 && hi_scale > lo_scale))
    throw std::invalid_argument("required_ebn0: need 0 < lo_scale < hi_scale");

  double current = 1.0;  // cumulative factor applied to ctx
  const auto pupe_at = [&](double scale) {
    ctx.rescale_powers(scale / current);
    current = scale;
    return estimate_pupe(ctx, trials, mode);
  };

  Ebn0Point pt;
  pt.sweep_value = ctx.cfg.K_a;
  pt.sigma2 = ctx.cfg.sigma2;
  pt.trials = trials;

  double lo = lo_scale, hi = hi_scale;
  PupeEstimate at_hi = pupe_at(hi);
  for (int widen = 0; at_hi.p_e > target_pupe && widen < 3; ++widen) {
    hi *= 8.0;
    at_hi = pupe_at(hi);
  }
  if (at_hi.p_e > target_pupe) {
    ctx.rescale_powers(1.0 / current);  // restore entry scale
    pt.feasible = false;
    return pt;
  }
  PupeEstimate at_lo = pupe_at(lo);
  for (int widen = 0; at_lo.p_e <= target_pupe && widen < 3; ++widen) {
    hi = lo;
    at_hi = at_lo;
    lo /= 8.0;
    at_lo = pupe_at(lo);
  }

  // Geometric bisection: hi stays feasible, lo stays infeasible (or is the
  // bottom of the widened bracket).
  while (10.0 * std::log10(hi / lo) > 0.25) {
    const double mid = std::sqrt(hi * lo);
    const PupeEstimate at_mid = pupe_at(mid);
    if (at_mid.p_e <= target_pupe) {
      hi = mid;
      at_hi = at_mid;
    } else {
      lo = mid;
    }
  }

  ctx.rescale_powers(hi / current);
  current = hi;
  pt.feasible = true;
  pt.ebn0_db = ebn0_db(ctx.cfg);
  pt.P_p = ctx.cfg.P_p;
  pt.P_d = ctx.cfg.P_d;
  pt.p_e = at_hi.p_e;
  ctx.rescale_powers(1.0 / current);
  return pt;
}

Ebn0Result ebn0_sweep(const SystemConfig& base, const std::vector<int>& ka_values,
                      double target_pupe, int trials, CoopMode mode, const std::string& label) {
  Ebn0Result result;
  result.label = label;
  result.base = base;
  result.target_pupe = target_pupe;
  SimulationContext ctx = make_context(base);
  for (const int ka : ka_values) {
    ctx.cfg.K_a = ka;
    result.points.push_back(required_ebn0(ctx, target_pupe, trials, mode));
  }
  return result;
}

void emit_results(const SweepResult& result, const std::string& out_dir, const std::string& stem) {
  if (result.points.empty()) throw std::invalid_argument("emit_results: empty sweep");
  std::filesystem::create_directories(out_dir);
  const std::string base = out_dir + "/" + stem;

  std::string csv = "sweep_value,p_md,p_fa,p_e,std_err,trials,config_hash\n";
  for (const auto& pt : result.points) {
    csv += g17(pt.sweep_value) + "," + g17(pt.est.p_md) + "," + g17(pt.est.p_fa) + "," +
           g17(pt.est.p_e) + "," + g17(pt.est.std_err) + "," + std::to_string(pt.est.trials) +
           "," + hex64(pt.config_hash) + "\n";
  }
  write_file(base + ".csv", csv);
  write_file(base + ".json", manifest_json(result.base, "sweep", result.label,
                                           result.points.size(), 0.0));

  double floor = 1.0;
  PlotSeries series{result.label, {}};
  for (const auto& pt : result.points) {
    series.points.emplace_back(pt.sweep_value, pt.est.p_e);
    floor = std::min(floor, 1.0 / (std::max(1.0, pt.sweep_value) * pt.est.trials));
  }
  PlotSpec spec;
  spec.title = "PUPE vs " + result.sweep_name;
  spec.x_label = result.sweep_name;
  spec.y_label = "PUPE";
  spec.log_y = true;
  spec.y_floor = floor;
  write_file(base + ".svg", render_line_plot(spec, {series}));
}

void emit_results(const Ebn0Result& result, const std::string& out_dir, const std::string& stem) {
  if (result.points.empty()) throw std::invalid_argument("emit_results: empty sweep");
  std::filesystem::create_directories(out_dir);
  const std::string base = out_dir + "/" + stem;

  std::string csv = "sweep_value,feasible,ebn0_db,P_p,P_d,sigma2,p_e,trials,config_hash\n";
  for (const auto& pt : result.points) {
    csv += g17(pt.sweep_value) + "," + (pt.feasible ? "1" : "0") + "," + g17(pt.ebn0_db) + "," +
           g17(pt.P_p) + "," + g17(pt.P_d) + "," + g17(pt.sigma2) + "," + g17(pt.p_e) + "," +
           std::to_string(pt.trials) + "," + hex64(config_hash(result.base)) + "\n";
  }
  write_file(base + ".csv", csv);
  write_file(base + ".json", manifest_json(result.base, "ebn0", result.label,
                                           result.points.size(), result.target_pupe));

  PlotSeries series{result.label, {}};
  for (const auto& pt : result.points)
    if (pt.feasible) series.points.emplace_back(pt.sweep_value, pt.ebn0_db);
  if (!series.points.empty()) {
    PlotSpec spec;
    spec.title = "Required Eb/N0 (PUPE <= " + g17(result.target_pupe) + ")";
    spec.x_label = "K_a";
    spec.y_label = "Eb/N0 [dB]";
    write_file(base + ".svg", render_line_plot(spec, {series}));
  }
}

void dump_environment(const SimulationContext& ctx, std::uint64_t trial_index,
                      const std::string& out_dir, const std::string& stem) {
  std::filesystem::create_directories(out_dir);
  const std::uint64_t trial_seed = derive_seed(ctx.cfg.master_seed, "trial", trial_index);
  const Topology topo =
      build_topology(place_points(derive_seed(trial_seed, "aps", 0), ctx.cfg.M, ctx.cfg.D),
                     place_points(derive_seed(trial_seed, "users", 0), ctx.cfg.K_a, ctx.cfg.D));
  const Eigen::MatrixXd F = shadow_fading(
      derive_seed(derive_seed(trial_seed, "channel", 0), "shadow", 0), topo);
  const Eigen::MatrixXd beta = large_scale(topo, F);

  std::string csv = "record,i,j,x,y,value\n";
  for (std::size_t m = 0; m < topo.ap_positions.size(); ++m)
    csv += "ap," + std::to_string(m) + ",," + g17(topo.ap_positions[m].x) + "," +
           g17(topo.ap_positions[m].y) + ",\n";
  for (std::size_t i = 0; i < topo.user_positions.size(); ++i)
    csv += "user," + std::to_string(i) + ",," + g17(topo.user_positions[i].x) + "," +
           g17(topo.user_positions[i].y) + ",\n";
  for (Eigen::Index i = 0; i < beta.rows(); ++i)
    for (Eigen::Index m = 0; m < beta.cols(); ++m)
      csv += "beta," + std::to_string(i) + "," + std::to_string(m) + ",,," + g17(beta(i, m)) + "\n";
  write_file(out_dir + "/" + stem + ".csv", csv);
}

}  // namespace uracf
