#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "uracf/codebook.hpp"

namespace uracf {

/// Precomputed pilot Gram A^H·A (N×N). Real storage when the codebook is
/// real-valued (half the memory and most of the build cost). Optional: the
/// receiver falls back to direct correlation when absent.
struct PilotGram {
  Eigen::MatrixXd real;
  Eigen::MatrixXcd cx;
  bool is_real = true;

  long N() const { return is_real ? static_cast<long>(real.rows()) : static_cast<long>(cx.rows()); }
  /// Scales the Gram consistently with A ← √factor·A.
  void rescale(double factor) {
    if (is_real) real *= factor; else cx *= factor;
  }
};

PilotGram build_pilot_gram(const PilotCodebook& cb);

/// A^H·Y_p, using the real-entry fast path when available.
Eigen::MatrixXcd pilot_correlate(const PilotCodebook& cb, const Eigen::MatrixXcd& Y_p);

struct OmpResult {
  std::vector<long> detected;  ///< ≤ K_m distinct pilot indices, selection order
  Eigen::MatrixXcd G_hat;      ///< |detected| × M_r, rows follow detected order
};

/// Greedy OMP with LMMSE deflation: per iteration, correlate the residual
/// against all pilots, pick the undetected index with the largest row norm
/// (ties → lowest index), then rebuild the residual from the ORIGINAL Y_p by
/// ridge-regularized projection onto the cumulative support. The final
/// projection coefficients are the channel estimates.
///
/// gram/R0 are optional precomputed A^H·A and A^H·Y_p (identical results,
/// computed incrementally instead of by dense correlation per iteration).
/// excluded[i] != 0 bars pilot i from selection.
OmpResult omp_detect(const Eigen::MatrixXcd& Y_p_resid, const PilotCodebook& cb, int K_m,
                     double reg, const PilotGram* gram = nullptr,
                     const Eigen::MatrixXcd* R0 = nullptr,
                     const std::vector<char>* excluded = nullptr);

/// W = (Ĝ^H·Ĝ + (σ²/P_d)·I_{M_r})^{−1}·Ĝ^H, Ĉ' = Y_d·W; column u of the
/// result takes Ĉ'[:, u] at user u's pattern positions in increasing order.
/// G_hat rows = detected users; patterns[u] = active indices of user u.
Eigen::MatrixXcd lmmse_symbols(const Eigen::MatrixXcd& Y_d_resid, const Eigen::MatrixXcd& G_hat,
                               double sigma2, double P_d,
                               const std::vector<const std::vector<int>*>& patterns);

/// Subtracts x̂·ĝ for every decoded frame whose pilot index is in `detected`
/// (this AP's own estimate row), over the full frame. Frames not detected
/// here leave the residual bit-exact.
void sic_subtract(Eigen::MatrixXcd& Y_resid,
                  const std::vector<std::pair<long, const Eigen::VectorXcd*>>& decoded_frames,
                  const Eigen::MatrixXcd& G_hat, const std::vector<long>& detected);

}  // namespace uracf
