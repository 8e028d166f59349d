#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "uracf/modem.hpp"

namespace uracf {

/// Shared pilot codebook A: n_p × N complex, every column with Euclidean norm
/// √(n_p·P_p). Entries are real standard normal by default (imaginary parts
/// zero); A_re caches the real part for fast correlation in that case.
struct PilotCodebook {
  Eigen::MatrixXcd A;
  Eigen::MatrixXd A_re;  ///< populated iff real_entries
  double P_p = 0.0;
  bool real_entries = true;

  int n_p() const { return static_cast<int>(A.rows()); }
  long N() const { return static_cast<long>(A.cols()); }
};

/// ODMA transmission-pattern matrix: (n − n_p) × N binary, n_d ones per
/// column. active_indices[c] lists the one-positions of column c, ascending.
struct PatternMatrix {
  Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> P;
  std::vector<std::vector<int>> active_indices;
  int n_d = 0;

  int n_data_slots() const { return static_cast<int>(P.rows()); }
  long N() const { return static_cast<long>(P.cols()); }
};

/// Entries i.i.d. real standard normal (CN(0,1) when complex_entries), then
/// each column rescaled to norm √(n_p·P_p). Deterministic in seed.
PilotCodebook generate_pilot_codebook(std::uint64_t seed, int n_p, long N, double P_p,
                                      bool complex_entries = false);

/// Each column's support: a uniformly random n_d-subset of the slot indices,
/// independent across columns (partial Fisher–Yates). Deterministic in seed.
PatternMatrix generate_pattern_matrix(std::uint64_t seed, int n_data_slots, long N, int n_d);

/// Big-endian: first bit is most significant. Pre: 0 < |bits| ≤ 62.
long bits_to_index(const std::vector<std::uint8_t>& bits);
std::vector<std::uint8_t> index_to_bits(long index, int B_p);

/// Binary dump/load of A and P for cross-implementation comparison.
/// Layout: magic "URACBK01", then little-endian u64 fields version, n_p, N,
/// n_d, n_data_slots, f64 P_p; then A row-major as (re, im) f64 pairs; then P
/// row-major, packed 8 entries per byte, LSB first.
void dump_codebook(const std::string& path, const PilotCodebook& cb, const PatternMatrix& pm);
std::pair<PilotCodebook, PatternMatrix> load_codebook(const std::string& path);

}  // namespace uracf
