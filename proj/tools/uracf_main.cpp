#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uracf/harness.hpp"

namespace {

using namespace uracf;

struct CommonFlags {
  std::string config_path;
  std::string out_dir = "results";
  std::string mode = "coop";
  int trials = 200;
  std::vector<int> ka_values;
  long seed = -1;
  int m = -1, mr = -1, km = -1;
  double power_dbm = 1e9, noise_dbm = 1e9;
  bool full_scale = false;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool ka_list) {
  cmd->add_option("--config", f.config_path, "JSON config file; flags override its values");
  cmd->add_option("--trials", f.trials, "Monte Carlo trials per point");
  cmd->add_option("--seed", f.seed, "master seed override");
  if (ka_list)
    cmd->add_option("--ka", f.ka_values, "active-user counts")->delimiter(',');
  else
    cmd->add_option("--ka", f.ka_values, "active-user count")->expected(1);
  cmd->add_option("--mode", f.mode, "coop|nocoop|central")
      ->check(CLI::IsMember({"coop", "nocoop", "central"}));
  cmd->add_option("--m", f.m, "number of APs");
  cmd->add_option("--mr", f.mr, "antennas per AP");
  cmd->add_option("--km", f.km, "users recovered per AP");
  cmd->add_option("--out", f.out_dir, "output directory");
  cmd->add_option("--power-dbm", f.power_dbm, "pilot and data symbol power, dBm");
  cmd->add_option("--noise-dbm", f.noise_dbm, "noise power sigma^2, dBm");
  cmd->add_flag("--full-scale", f.full_scale,
                "apply the full-scale preset (M=100, M_r=1, K_m=10); hours of runtime");
}

SystemConfig build_config(const CommonFlags& f) {
  SystemConfig cfg;
  if (!f.config_path.empty()) cfg = load_config_file(f.config_path);
  if (f.full_scale) {
    cfg.M = 100;
    cfg.M_r = 1;
    cfg.K_m = 10;
  }
  if (f.seed >= 0) cfg.master_seed = static_cast<std::uint64_t>(f.seed);
  if (f.m > 0) cfg.M = f.m;
  if (f.mr > 0) cfg.M_r = f.mr;
  if (f.km > 0) cfg.K_m = f.km;
  if (f.power_dbm < 1e8) cfg.P_p = cfg.P_d = dbm_to_watts(f.power_dbm);
  if (f.noise_dbm < 1e8) cfg.sigma2 = dbm_to_watts(f.noise_dbm);
  if (!f.ka_values.empty()) cfg.K_a = f.ka_values.front();
  if (f.mode == "central") {
    cfg.M_r = cfg.M * cfg.M_r;  // same total antenna count, one site
    cfg.M = 1;
  }
  const auto violations = validate_config(cfg);
  if (!violations.empty()) {
    for (const auto& v : violations) std::fprintf(stderr, "config error: %s\n", v.c_str());
    throw std::runtime_error("invalid configuration");
  }
  return cfg;
}

CoopMode coop_mode(const std::string& mode) {
  return mode == "nocoop" ? CoopMode::kNoCooperation : CoopMode::kCooperative;
}

int cmd_simulate(const CommonFlags& f) {
  const SystemConfig cfg = build_config(f);
  SweepResult result;
  result.sweep_name = "K_a";
  result.label = f.mode;
  result.base = cfg;
  SimulationContext ctx = make_context(cfg);
  SweepPoint pt;
  pt.sweep_value = cfg.K_a;
  pt.est = estimate_pupe(ctx, f.trials, coop_mode(f.mode));
  pt.config_hash = config_hash(cfg);
  result.points.push_back(pt);
  emit_results(result, f.out_dir, "simulate");
  std::printf("K_a=%d mode=%s trials=%d  p_md=%.6g p_fa=%.6g p_e=%.6g (std_err %.2g)\n",
              cfg.K_a, f.mode.c_str(), f.trials, pt.est.p_md, pt.est.p_fa, pt.est.p_e,
              pt.est.std_err);
  std::printf("results written to %s/simulate.{csv,json,svg}\n", f.out_dir.c_str());
  return 0;
}

int cmd_sweep(const CommonFlags& f) {
  const SystemConfig cfg = build_config(f);
  std::vector<int> kas = f.ka_values;
  if (kas.empty()) kas = {50, 100, 150, 200};
  const SweepResult result = sweep_ka(cfg, kas, f.trials, coop_mode(f.mode), f.mode);
  emit_results(result, f.out_dir, "sweep");
  for (const auto& pt : result.points)
    std::printf("K_a=%-5g p_md=%.6g p_fa=%.6g p_e=%.6g (std_err %.2g)\n", pt.sweep_value,
                pt.est.p_md, pt.est.p_fa, pt.est.p_e, pt.est.std_err);
  std::printf("results written to %s/sweep.{csv,json,svg}\n", f.out_dir.c_str());
  return 0;
}

int cmd_ebn0(const CommonFlags& f, double target) {
  const SystemConfig cfg = build_config(f);
  std::vector<int> kas = f.ka_values;
  if (kas.empty()) kas = {50, 100, 150, 200};
  const Ebn0Result result = ebn0_sweep(cfg, kas, target, f.trials, coop_mode(f.mode), f.mode);
  emit_results(result, f.out_dir, "ebn0");
  for (const auto& pt : result.points) {
    if (pt.feasible)
      std::printf("K_a=%-5g Eb/N0=%.3f dB (p_e=%.4g at P_d=%.4g W)\n", pt.sweep_value,
                  pt.ebn0_db, pt.p_e, pt.P_d);
    else
      std::printf("K_a=%-5g infeasible within bracket\n", pt.sweep_value);
  }
  std::printf("results written to %s/ebn0.{csv,json,svg}\n", f.out_dir.c_str());
  return 0;
}

int cmd_dump_env(const CommonFlags& f, std::uint64_t trial) {
  const SystemConfig cfg = build_config(f);
  const SimulationContext ctx = make_context(cfg, /*build_gram=*/false);
  dump_environment(ctx, trial, f.out_dir, "environment");
  std::printf("environment written to %s/environment.csv\n", f.out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Link-level Monte Carlo simulator for unsourced random access "
               "over cell-free massive MIMO"};
  app.require_subcommand(1);

  CommonFlags f_sim, f_sweep, f_ebn0, f_env;
  double target_pupe = 0.05;
  std::uint64_t trial_index = 0;

  add_common(app.add_subcommand("simulate", "PUPE at a fixed configuration"), f_sim, false);
  add_common(app.add_subcommand("sweep", "PUPE vs K_a"), f_sweep, true);
  auto* ebn0 = app.add_subcommand("ebn0", "required Eb/N0 vs K_a");
  add_common(ebn0, f_ebn0, true);
  ebn0->add_option("--target", target_pupe, "PUPE target for the bisection");
  auto* env = app.add_subcommand("dump-env", "write topology and path-loss debug CSV");
  add_common(env, f_env, false);
  env->add_option("--trial", trial_index, "trial index to dump");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("simulate")) return cmd_simulate(f_sim);
    if (app.got_subcommand("sweep")) return cmd_sweep(f_sweep);
    if (app.got_subcommand("ebn0")) return cmd_ebn0(f_ebn0, target_pupe);
    if (app.got_subcommand("dump-env")) return cmd_dump_env(f_env, trial_index);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
