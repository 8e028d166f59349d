#include "uracf/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace uracf {
namespace {

using json = nlohmann::ordered_json;

bool is_power_of_two(long v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

std::vector<std::string> validate_config(const SystemConfig& cfg) {
  std::vector<std::string> out;
  auto fail = [&out](const std::string& rule, const std::string& detail) {
    out.push_back("violated: " + rule + " (" + detail + ")");
  };

  // Work in wide integers so no input combination can overflow.
  const long long n = cfg.n, B = cfg.B, B_p = cfg.B_p, n_p = cfg.n_p;
  const long long n_c = cfg.n_c, r = cfg.r;

  if (n < 1) fail("n >= 1", "n=" + std::to_string(n));
  if (B < 1) fail("B >= 1", "B=" + std::to_string(B));
  if (B_p < 0) fail("B_p >= 0", "B_p=" + std::to_string(B_p));
  if (n_p < 1) fail("n_p >= 1", "n_p=" + std::to_string(n_p));
  if (r < 0) fail("r >= 0", "r=" + std::to_string(r));

  if (n_c < 2 || n_c % 2 != 0) {
    fail("n_c even and positive (n_d = n_c / 2)", "n_c=" + std::to_string(n_c));
  } else {
    if (!is_power_of_two(n_c))
      fail("n_c a power of two", "n_c=" + std::to_string(n_c));
    const long long n_d = n_c / 2;
    if (n_p + n_d > n)
      fail("n_p + n_d <= n", "n_p=" + std::to_string(n_p) + ", n_d=" +
                                 std::to_string(n_d) + ", n=" + std::to_string(n));
  }

  const long long B_c = B - B_p;
  if (B_c <= 0) fail("B_c > 0", "B=" + std::to_string(B) + ", B_p=" + std::to_string(B_p));
  if (B_c > 0 && B_c + r > n_c)
    fail("B_c + r <= n_c", "B_c=" + std::to_string(B_c) + ", r=" + std::to_string(r) +
                               ", n_c=" + std::to_string(n_c));

  if (!(cfg.P_p > 0.0) || !std::isfinite(cfg.P_p))
    fail("P_p > 0", "P_p=" + std::to_string(cfg.P_p));
  if (!(cfg.P_d > 0.0) || !std::isfinite(cfg.P_d))
    fail("P_d > 0", "P_d=" + std::to_string(cfg.P_d));
  if (!(cfg.sigma2 > 0.0) || !std::isfinite(cfg.sigma2))
    fail("sigma2 > 0", "sigma2=" + std::to_string(cfg.sigma2));

  if (cfg.K_a < 1) fail("K_a >= 1", "K_a=" + std::to_string(cfg.K_a));
  if (cfg.K_tot < cfg.K_a)
    fail("K_tot >= K_a", "K_tot=" + std::to_string(cfg.K_tot) + ", K_a=" + std::to_string(cfg.K_a));
  if (cfg.M < 1) fail("M >= 1", "M=" + std::to_string(cfg.M));
  if (cfg.M_r < 1) fail("M_r >= 1", "M_r=" + std::to_string(cfg.M_r));
  if (cfg.K_m < 1 || (B_p >= 0 && static_cast<long long>(cfg.K_m) > cfg.num_pilots()))
    fail("1 <= K_m <= N", "K_m=" + std::to_string(cfg.K_m) + ", B_p=" + std::to_string(B_p));
  if (!(cfg.D > 0.0) || !std::isfinite(cfg.D))
    fail("D > 0", "D=" + std::to_string(cfg.D));
  if (cfg.L_list < 1) fail("L_list >= 1", "L_list=" + std::to_string(cfg.L_list));
  if (cfg.n_dec < 1) fail("n_dec >= 1", "n_dec=" + std::to_string(cfg.n_dec));
  if (!(cfg.asd_deg >= 0.0) || !std::isfinite(cfg.asd_deg))
    fail("asd_deg >= 0", "asd_deg=" + std::to_string(cfg.asd_deg));
  if (cfg.r > 0 && (cfg.crc_poly >> cfg.r) != 0 && cfg.r < 64)
    fail("crc_poly fits in r bits", "crc_poly=" + std::to_string(cfg.crc_poly) +
                                        ", r=" + std::to_string(cfg.r));

  return out;
}

std::string config_to_json(const SystemConfig& cfg) {
  json j;
  j["n"] = cfg.n;
  j["B"] = cfg.B;
  j["B_p"] = cfg.B_p;
  j["n_p"] = cfg.n_p;
  j["n_c"] = cfg.n_c;
  j["r"] = cfg.r;
  j["K_a"] = cfg.K_a;
  j["K_tot"] = cfg.K_tot;
  j["M"] = cfg.M;
  j["M_r"] = cfg.M_r;
  j["K_m"] = cfg.K_m;
  j["D"] = cfg.D;
  j["P_p"] = cfg.P_p;
  j["P_d"] = cfg.P_d;
  j["sigma2"] = cfg.sigma2;
  j["L_list"] = cfg.L_list;
  j["n_dec"] = cfg.n_dec;
  j["asd_deg"] = cfg.asd_deg;
  j["master_seed"] = cfg.master_seed;
  j["complex_pilots"] = cfg.complex_pilots;
  j["correlation_model"] = correlation_model_name(cfg.correlation_model);
  j["crc_poly"] = cfg.crc_poly;
  j["crc_init"] = cfg.crc_init;
  j["crc_xorout"] = cfg.crc_xorout;
  j["crc_reflect"] = cfg.crc_reflect;
  return j.dump(2) + "\n";
}

SystemConfig config_from_json(const std::string& text) {
  const json j = json::parse(text);
  if (!j.is_object()) throw std::runtime_error("config: top-level JSON value must be an object");

  SystemConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "n") cfg.n = value.get<int>();
    else if (key == "B") cfg.B = value.get<int>();
    else if (key == "B_p") cfg.B_p = value.get<int>();
    else if (key == "n_p") cfg.n_p = value.get<int>();
    else if (key == "n_c") cfg.n_c = value.get<int>();
    else if (key == "r") cfg.r = value.get<int>();
    else if (key == "K_a") cfg.K_a = value.get<int>();
    else if (key == "K_tot") cfg.K_tot = value.get<long>();
    else if (key == "M") cfg.M = value.get<int>();
    else if (key == "M_r") cfg.M_r = value.get<int>();
    else if (key == "K_m") cfg.K_m = value.get<int>();
    else if (key == "D") cfg.D = value.get<double>();
    else if (key == "P_p") cfg.P_p = value.get<double>();
    else if (key == "P_d") cfg.P_d = value.get<double>();
    else if (key == "sigma2") cfg.sigma2 = value.get<double>();
    else if (key == "L_list") cfg.L_list = value.get<int>();
    else if (key == "n_dec") cfg.n_dec = value.get<int>();
    else if (key == "asd_deg") cfg.asd_deg = value.get<double>();
    else if (key == "master_seed") cfg.master_seed = value.get<std::uint64_t>();
    else if (key == "complex_pilots") cfg.complex_pilots = value.get<bool>();
    else if (key == "correlation_model") {
      const auto name = value.get<std::string>();
      if (name == "gaussian_local_scattering")
        cfg.correlation_model = CorrelationModel::kGaussianLocalScattering;
      else if (name == "identity")
        cfg.correlation_model = CorrelationModel::kIdentity;
      else
        throw std::runtime_error("config: unknown correlation_model '" + name + "'");
    }
    else if (key == "crc_poly") cfg.crc_poly = value.get<std::uint64_t>();
    else if (key == "crc_init") cfg.crc_init = value.get<std::uint64_t>();
    else if (key == "crc_xorout") cfg.crc_xorout = value.get<std::uint64_t>();
    else if (key == "crc_reflect") cfg.crc_reflect = value.get<bool>();
    else throw std::runtime_error("config: unknown key '" + key + "'");
  }
  return cfg;
}

SystemConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return config_from_json(buf.str());
}

std::uint64_t config_hash(const SystemConfig& cfg) {
  // FNV-1a over the canonical serialization.
  std::uint64_t h = 14695981039346656037ULL;
  for (const char c : config_to_json(cfg)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

std::string correlation_model_name(CorrelationModel model) {
  switch (model) {
    case CorrelationModel::kGaussianLocalScattering: return "gaussian_local_scattering";
    case CorrelationModel::kIdentity: return "identity";
  }
  throw std::logic_error("correlation_model_name: unreachable");
}

}  // namespace uracf
