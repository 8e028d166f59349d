#include "uracf/ap_receiver.hpp"

#include <stdexcept>

namespace uracf {
namespace {

/// Solves (G_SS + reg·I)·B = rhs for the cumulative support.
Eigen::MatrixXcd ridge_solve(const Eigen::MatrixXcd& G_SS, double reg,
                             const Eigen::MatrixXcd& rhs) {
  Eigen::MatrixXcd lhs = G_SS;
  lhs.diagonal().array() += reg;
  Eigen::LDLT<Eigen::MatrixXcd> ldlt(lhs);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("omp_detect: support Gram factorization failed (reg=" +
                             std::to_string(reg) + ")");
  return ldlt.solve(rhs);
}

}  // namespace

PilotGram build_pilot_gram(const PilotCodebook& cb) {
  PilotGram gram;
  gram.is_real = cb.real_entries;
  if (gram.is_real) {
    gram.real.setZero(cb.N(), cb.N());
    gram.real.selfadjointView<Eigen::Lower>().rankUpdate(cb.A_re.transpose());
    gram.real.triangularView<Eigen::StrictlyUpper>() = gram.real.transpose();
  } else {
    gram.cx.noalias() = cb.A.adjoint() * cb.A;
  }
  return gram;
}

Eigen::MatrixXcd pilot_correlate(const PilotCodebook& cb, const Eigen::MatrixXcd& Y_p) {
  if (cb.real_entries) {
    Eigen::MatrixXcd R(cb.N(), Y_p.cols());
    R.real() = cb.A_re.transpose() * Y_p.real();
    R.imag() = cb.A_re.transpose() * Y_p.imag();
    return R;
  }
  return cb.A.adjoint() * Y_p;
}

OmpResult omp_detect(const Eigen::MatrixXcd& Y_p_resid, const PilotCodebook& cb, int K_m,
                     double reg, const PilotGram* gram, const Eigen::MatrixXcd* R0,
                     const std::vector<char>* excluded) {
  if (!(reg > 0.0)) throw std::invalid_argument("omp_detect: reg must be > 0");
  if (Y_p_resid.rows() != cb.n_p())
    throw std::invalid_argument("omp_detect: Y_p row count != n_p");
  const long N = cb.N();
  const auto M_r = Y_p_resid.cols();

  Eigen::MatrixXcd R0_local;
  if (R0 == nullptr) {
    R0_local = pilot_correlate(cb, Y_p_resid);
    R0 = &R0_local;
  }

  OmpResult out;
  out.G_hat.resize(0, M_r);
  std::vector<char> taken(N, 0);
  if (excluded != nullptr) {
    if (static_cast<long>(excluded->size()) != N)
      throw std::invalid_argument("omp_detect: excluded mask size != N");
    taken = *excluded;
  }

  Eigen::MatrixXcd R = *R0;               // residual pilot correlation
  Eigen::MatrixXcd gram_S(N, K_m);        // A^H·A_S, grown per selection
  Eigen::MatrixXcd G_SS(K_m, K_m);        // A_S^H·A_S
  Eigen::MatrixXcd rhs(K_m, M_r);         // A_S^H·Y_p
  Eigen::MatrixXcd B;                     // ridge projection coefficients

  int k = 0;
  for (; k < K_m; ++k) {
    long best = -1;
    double best_metric = -1.0;
    for (long i = 0; i < N; ++i) {
      if (taken[i]) continue;
      const double metric = R.row(i).squaredNorm();
      if (metric > best_metric) {
        best_metric = metric;
        best = i;
      }
    }
    if (best < 0) break;  // every index already taken
    taken[best] = 1;
    out.detected.push_back(best);

    // Grow A^H·A_S, A_S^H·A_S and A_S^H·Y_p by the new column/row.
    if (gram != nullptr) {
      if (gram->is_real)
        gram_S.col(k) = gram->real.col(best).cast<cplx>();
      else
        gram_S.col(k) = gram->cx.col(best);
    } else {
      gram_S.col(k) = pilot_correlate(cb, cb.A.col(best));
    }
    for (int j = 0; j <= k; ++j) {
      G_SS(j, k) = gram_S(out.detected[j], k);
      G_SS(k, j) = std::conj(G_SS(j, k));
    }
    rhs.row(k) = R0->row(best);

    // Deflate from the ORIGINAL Y_p over the cumulative support, not from
    // the running residual: the ridge refit redistributes energy each round.
    B = ridge_solve(G_SS.topLeftCorner(k + 1, k + 1), reg, rhs.topRows(k + 1));
    R.noalias() = *R0 - gram_S.leftCols(k + 1) * B;
  }

  out.G_hat = (k > 0) ? B : Eigen::MatrixXcd::Zero(0, M_r).eval();
  return out;
}

Eigen::MatrixXcd lmmse_symbols(const Eigen::MatrixXcd& Y_d_resid, const Eigen::MatrixXcd& G_hat,
                               double sigma2, double P_d,
                               const std::vector<const std::vector<int>*>& patterns) {
  const auto K = G_hat.rows();
  const auto M_r = G_hat.cols();
  if (static_cast<Eigen::Index>(patterns.size()) != K)
    throw std::invalid_argument("lmmse_symbols: one pattern per detected user required");
  if (K == 0) return Eigen::MatrixXcd(0, 0);
  const auto n_d = static_cast<Eigen::Index>(patterns[0]->size());

  Eigen::MatrixXcd C_hat = Eigen::MatrixXcd::Zero(n_d, K);
  if (!(P_d > 0.0)) return C_hat;  // zero-power degenerate case: no estimate

  // W = (Ĝ^H·Ĝ + (σ²/P_d)·I)^{−1}·Ĝ^H over the M_r×M_r Gram.
  Eigen::MatrixXcd lhs = G_hat.adjoint() * G_hat;
  lhs.diagonal().array() += sigma2 / P_d;
  const Eigen::MatrixXcd W = Eigen::LDLT<Eigen::MatrixXcd>(lhs).solve(G_hat.adjoint());

  const Eigen::MatrixXcd C_full = Y_d_resid * W;
  for (Eigen::Index u = 0; u < K; ++u) {
    const auto& idx = *patterns[u];
    if (static_cast<Eigen::Index>(idx.size()) != n_d)
      throw std::invalid_argument("lmmse_symbols: pattern length mismatch");
    for (Eigen::Index t = 0; t < n_d; ++t) {
      const int row = idx[t];
      if (row < 0 || row >= Y_d_resid.rows())
        throw std::invalid_argument("lmmse_symbols: pattern index out of range");
      C_hat(t, u) = C_full(row, u);
    }
  }
  return C_hat;
}

void sic_subtract(Eigen::MatrixXcd& Y_resid,
                  const std::vector<std::pair<long, const Eigen::VectorXcd*>>& decoded_frames,
                  const Eigen::MatrixXcd& G_hat, const std::vector<long>& detected) {
  for (const auto& [pilot, signal] : decoded_frames) {
    for (std::size_t u = 0; u < detected.size(); ++u) {
      if (detected[u] != pilot) continue;
      if (signal->size() != Y_resid.rows())
        throw std::invalid_argument("sic_subtract: frame length mismatch");
      Y_resid.noalias() -= *signal * G_hat.row(u);
      break;
    }
  }
}

}  // namespace uracf
