#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "uracf/harness.hpp"

using namespace uracf;

namespace {

// Desk-size scenario that exercises the full pipeline in milliseconds:
// 128 pilots of length 48, (64, 32) polar code, 148-use frames. B_p = 7
// keeps the two-user pilot-collision probability per trial below 1%.
SystemConfig tiny_config() {
  SystemConfig cfg;
  cfg.n = 148;
  cfg.B = 23;
  cfg.B_p = 7;
  cfg.n_p = 48;
  cfg.n_c = 64;
  cfg.r = 16;
  cfg.K_a = 2;
  cfg.M = 2;
  cfg.M_r = 2;
  cfg.K_m = 3;
  cfg.n_dec = 4;
  cfg.P_p = cfg.P_d = 0.01;
  cfg.sigma2 = 1e-17;  // ~45 dB of post-path-loss SNR at typical distances
  cfg.master_seed = 777;
  return cfg;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("harness: context construction is complete and deterministic") {
  const SystemConfig cfg = tiny_config();
  REQUIRE(validate_config(cfg).empty());
  const SimulationContext ctx = make_context(cfg);
  CHECK(ctx.codebook.n_p() == 48);
  CHECK(ctx.codebook.N() == 128);
  CHECK(ctx.patterns.N() == 128);
  CHECK(ctx.patterns.n_data_slots() == 100);
  CHECK(ctx.patterns.n_d == 32);
  CHECK(ctx.polar.n_c == 64);
  CHECK(ctx.polar.k == 32);
  CHECK(ctx.crc.width == 16);
  CHECK(ctx.has_gram);
  CHECK(ctx.gram.N() == 128);

  const SimulationContext ctx2 = make_context(cfg);
  CHECK((ctx.codebook.A.array() == ctx2.codebook.A.array()).all());
  CHECK(ctx.patterns.active_indices == ctx2.patterns.active_indices);
}

TEST_CASE("harness: rescale_powers keeps codebook, Gram, and config in step") {
  SimulationContext ctx = make_context(tiny_config());
  const double norm0 = ctx.codebook.A.col(3).norm();
  const double gram0 = ctx.gram.real(3, 3);
  ctx.rescale_powers(4.0);
  CHECK(ctx.cfg.P_p == doctest::Approx(0.04).epsilon(1e-12));
  CHECK(ctx.cfg.P_d == doctest::Approx(0.04).epsilon(1e-12));
  CHECK(ctx.codebook.A.col(3).norm() == doctest::Approx(2.0 * norm0).epsilon(1e-12));
  CHECK(ctx.gram.real(3, 3) == doctest::Approx(4.0 * gram0).epsilon(1e-12));
  CHECK(ctx.codebook.P_p == doctest::Approx(ctx.cfg.P_p).epsilon(1e-12));
  // norms still satisfy the sqrt(n_p * P_p) contract after rescaling
  CHECK(ctx.codebook.A.col(3).norm() ==
        doctest::Approx(std::sqrt(48 * ctx.cfg.P_p)).epsilon(1e-9));
}

TEST_CASE("harness: trials are deterministic and decode at high SNR") {
  const SimulationContext ctx = make_context(tiny_config());
  const TrialResult a = run_trial(ctx, 3);
  const TrialResult b = run_trial(ctx, 3);
  CHECK(a.decoded == b.decoded);
  CHECK(a.n_md == b.n_md);
  CHECK(a.n_fa == b.n_fa);
  CHECK(a.per_iteration_decoded == b.per_iteration_decoded);

  int md = 0, fa = 0;
  for (int t = 0; t < 10; ++t) {
    const TrialResult r = run_trial(ctx, t);
    md += r.n_md;
    fa += r.n_fa;
  }
  // two users, two 2-antenna APs, ~45 dB SNR: errors should be rare
  CHECK(md + fa <= 2);
}

TEST_CASE("harness: empty output lists count as zero false-alarm rate") {
  SystemConfig cfg = tiny_config();
  cfg.sigma2 = 1e-9;  // drowns the signal completely
  const PupeEstimate est = estimate_pupe(make_context(cfg), 6, CoopMode::kCooperative);
  CHECK(est.p_md == doctest::Approx(1.0));
  CHECK(est.p_fa == 0.0);  // the 0/0 convention
  CHECK(est.p_e == doctest::Approx(1.0));
}

TEST_CASE("harness: standard error shrinks like one over sqrt trials") {
  SystemConfig cfg = tiny_config();
  cfg.K_a = 3;
  cfg.sigma2 = 2e-15;  // transition region: some trials succeed, some fail
  const SimulationContext ctx = make_context(cfg);
  const PupeEstimate small = estimate_pupe(ctx, 32, CoopMode::kCooperative);
  const PupeEstimate large = estimate_pupe(ctx, 128, CoopMode::kCooperative);
  REQUIRE(small.std_err > 0.0);
  REQUIRE(large.std_err > 0.0);
  CHECK(small.p_e > 0.02);
  CHECK(small.p_e < 0.98);
  // fourfold trials halve the standard error, up to sampling noise
  const double ratio = small.std_err / large.std_err;
  CHECK(ratio > 1.2);
  CHECK(ratio < 3.4);
}

TEST_CASE("harness: Eb/N0 arithmetic") {
  SystemConfig cfg;
  cfg.n_p = 1;
  cfg.n_c = 2;  // one QPSK data symbol
  cfg.B = 1;
  cfg.P_p = cfg.P_d = 1.0;
  cfg.sigma2 = 1.0;
  CHECK(ebn0_linear(cfg) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(ebn0_db(cfg) == doctest::Approx(3.0102999566398120).epsilon(1e-12));
  SystemConfig twice = cfg;
  twice.P_p *= 2.0;
  twice.P_d *= 2.0;
  CHECK(ebn0_db(twice) - ebn0_db(cfg) == doctest::Approx(3.0102999566398120).epsilon(1e-12));
  // defaults: (1152 + 512) * 0.01 / (100 * sigma2)
  const SystemConfig def;
  CHECK(ebn0_linear(def) ==
        doctest::Approx((1152 * 0.01 + 512 * 0.01) / (100 * def.sigma2)).epsilon(1e-15));
}

TEST_CASE("harness: required_ebn0 lands on target and reports its own arithmetic") {
  SystemConfig cfg = tiny_config();
  cfg.K_a = 3;
  cfg.sigma2 = 1e-14;
  SimulationContext ctx = make_context(cfg);
  const double entry_P_p = ctx.cfg.P_p;

  const Ebn0Point pt = required_ebn0(ctx, 0.35, 24, CoopMode::kCooperative, 1e-5, 1.0);
  REQUIRE(pt.feasible);
  CHECK(pt.p_e <= 0.35);
  SystemConfig at;
  at = cfg;
  at.P_p = pt.P_p;
  at.P_d = pt.P_d;
  at.sigma2 = pt.sigma2;
  CHECK(std::abs(pt.ebn0_db - ebn0_db(at)) <= 1e-12);
  // the context is handed back at its entry scale
  CHECK(ctx.cfg.P_p == doctest::Approx(entry_P_p).epsilon(1e-9));

  // initial bracket does not matter when it contains the crossing
  SimulationContext ctx2 = make_context(cfg);
  const Ebn0Point wide = required_ebn0(ctx2, 0.35, 24, CoopMode::kCooperative, 1e-7, 1.0);
  REQUIRE(wide.feasible);
  CHECK(std::abs(wide.ebn0_db - pt.ebn0_db) <= 0.75);  // both within bisection tolerance

  // unreachable target: honest infeasibility
  SimulationContext ctx3 = make_context(cfg);
  ctx3.cfg.sigma2 = 1.0;  // no power in the bracket can beat unit noise
  const Ebn0Point bad = required_ebn0(ctx3, 0.35, 6, CoopMode::kCooperative, 1e-5, 1.0);
  CHECK_FALSE(bad.feasible);
}

TEST_CASE("harness: sweep shapes and hashes") {
  SystemConfig cfg = tiny_config();
  cfg.K_a = 2;
  const SweepResult res = sweep_ka(cfg, {1, 2, 4}, 6, CoopMode::kCooperative, "coop");
  REQUIRE(res.points.size() == 3);
  CHECK(res.points[0].sweep_value == 1.0);
  CHECK(res.points[2].sweep_value == 4.0);
  CHECK(res.points[0].config_hash != res.points[1].config_hash);  // K_a differs
  CHECK(res.sweep_name == "K_a");
}

TEST_CASE("harness: emitted artifacts are complete and byte-stable") {
  SystemConfig cfg = tiny_config();
  const SweepResult res = sweep_ka(cfg, {1, 2}, 4, CoopMode::kCooperative, "coop");
  const std::string dir_a = "emit_test_a", dir_b = "emit_test_b";
  emit_results(res, dir_a, "sweep");
  emit_results(res, dir_b, "sweep");

  const std::string csv = slurp(dir_a + "/sweep.csv");
  CHECK(csv == slurp(dir_b + "/sweep.csv"));
  CHECK(slurp(dir_a + "/sweep.json") == slurp(dir_b + "/sweep.json"));
  CHECK(slurp(dir_a + "/sweep.svg") == slurp(dir_b + "/sweep.svg"));

  // header + one row per point
  int lines = 0;
  for (const char c : csv) lines += c == '\n';
  CHECK(lines == 3);
  CHECK(csv.rfind("sweep_value,p_md,p_fa,p_e,std_err,trials,config_hash", 0) == 0);
  CHECK(slurp(dir_a + "/sweep.json").find(kVersionString) != std::string::npos);
  CHECK(slurp(dir_a + "/sweep.svg").find("<svg") != std::string::npos);

  std::filesystem::remove_all(dir_a);
  std::filesystem::remove_all(dir_b);
}

TEST_CASE("harness: environment dump lists APs, users, and the beta matrix") {
  SystemConfig cfg = tiny_config();
  cfg.K_a = 3;
  cfg.M = 2;
  const SimulationContext ctx = make_context(cfg, false);
  const std::string dir = "env_test";
  dump_environment(ctx, 0, dir, "environment");
  const std::string csv = slurp(dir + "/environment.csv");
  int ap_rows = 0, user_rows = 0, beta_rows = 0;
  std::istringstream ss(csv);
  std::string line;
  std::getline(ss, line);
  CHECK(line == "record,i,j,x,y,value");
  while (std::getline(ss, line)) {
    if (line.rfind("ap,", 0) == 0) ++ap_rows;
    if (line.rfind("user,", 0) == 0) ++user_rows;
    if (line.rfind("beta,", 0) == 0) ++beta_rows;
  }
  CHECK(ap_rows == 2);
  CHECK(user_rows == 3);
  CHECK(beta_rows == 6);
  std::filesystem::remove_all(dir);
}
