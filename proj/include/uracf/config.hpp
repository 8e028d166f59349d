#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace uracf {

enum class CorrelationModel {
  kGaussianLocalScattering,
  kIdentity,
};

/// Every scenario parameter of one simulation. Powers are stored in watts;
/// dBm conversion happens only at the CLI boundary.
struct SystemConfig {
  // Frame and code geometry.
  int n = 3200;     ///< frame length in channel uses
  int B = 100;      ///< message bits per user
  int B_p = 12;     ///< pilot-selector bits (N = 2^B_p candidate pilots)
  int n_p = 1152;   ///< pilot length in channel uses
  int n_c = 1024;   ///< polar code length in bits
  int r = 16;       ///< CRC length in bits

  // Population and topology.
  int K_a = 100;      ///< active users
  long K_tot = 65536; ///< total user population (bookkeeping only)
  int M = 25;         ///< number of APs
  int M_r = 1;        ///< antennas per AP
  int K_m = 7;        ///< users recovered per AP per decoding iteration
  double D = 550.0;   ///< square side length, meters

  // Powers (watts).
  double P_p = 0.01;               ///< average pilot symbol power
  double P_d = 0.01;               ///< average data symbol power
  double sigma2 = 3.9810717055349695e-12;  ///< noise power (-84 dBm)

  // Receiver parameters.
  int L_list = 8;        ///< SCL list size
  int n_dec = 10;        ///< max decoding iterations
  double asd_deg = 10.0; ///< angular standard deviation, degrees

  std::uint64_t master_seed = 12345;

  // Experimentation switches.
  bool complex_pilots = false;  ///< CN(0,1) pilot entries instead of real N(0,1)
  CorrelationModel correlation_model = CorrelationModel::kGaussianLocalScattering;

  // CRC parameterization (width is always r).
  std::uint64_t crc_poly = 0x1021;  ///< x^16+x^12+x^5+1
  std::uint64_t crc_init = 0;
  std::uint64_t crc_xorout = 0;
  bool crc_reflect = false;

  // Derived quantities.
  int n_d() const { return n_c / 2; }                ///< QPSK symbols per codeword
  int B_c() const { return B - B_p; }                ///< polar payload bits
  int k() const { return B_c() + r; }                ///< polar info bits incl. CRC
  int data_slots() const { return n - n_p; }         ///< slots available to the pattern
  long num_pilots() const {                          ///< N = 2^B_p, saturating
    return B_p >= 62 ? (1L << 62) : (1L << (B_p < 0 ? 0 : B_p));
  }
};

/// One user's B message bits plus simulation-side ground truth.
struct Message {
  std::vector<std::uint8_t> bits;  ///< length exactly B
  int origin_user = -1;            ///< index into the active-user list; never visible to the receiver
};

/// Outcome of one Monte Carlo trial.
struct TrialResult {
  std::set<std::vector<std::uint8_t>> decoded;  ///< recovered B-bit messages
  int n_md = 0;                                 ///< misdetections (<= K_a)
  int n_fa = 0;                                 ///< false alarms (<= |decoded|)
  int iterations_used = 0;
  std::vector<int> per_iteration_decoded;       ///< new decodes per iteration
};

/// Returns every violated invariant as a human-readable description.
/// Empty result means the config is valid. Never throws.
std::vector<std::string> validate_config(const SystemConfig& cfg);

/// JSON (de)serialization using the exact field names of the config file
/// format. Parsing rejects unknown keys; absent keys keep their defaults.
std::string config_to_json(const SystemConfig& cfg);
SystemConfig config_from_json(const std::string& text);
SystemConfig load_config_file(const std::string& path);

/// Stable 64-bit hash of the full configuration, for result provenance.
std::uint64_t config_hash(const SystemConfig& cfg);

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

std::string correlation_model_name(CorrelationModel model);

}  // namespace uracf
