#include "uracf/channel.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace uracf {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

/// L with L·Lᵀ = C: Cholesky when C is numerically PD, otherwise
/// eigenvalue-clipped square root (handles exactly singular covariances,
/// e.g. co-located users with correlation 1).
Eigen::MatrixXd covariance_factor(const Eigen::MatrixXd& C) {
  Eigen::LLT<Eigen::MatrixXd> llt(C);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("shadow_fading: covariance eigendecomposition failed (K_a=" +
                             std::to_string(C.rows()) + ")");
  Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * lam.cwiseSqrt().asDiagonal();
}

}  // namespace

std::vector<Point> place_points(std::uint64_t seed, int count, double D) {
  if (count < 1) throw std::invalid_argument("place_points: count must be >= 1");
  if (!(D > 0.0)) throw std::invalid_argument("place_points: D must be > 0");
  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> u(0.0, D);
  std::vector<Point> pts(count);
  for (auto& p : pts) {
    p.x = u(rng);
    p.y = u(rng);
  }
  return pts;
}

Topology build_topology(const std::vector<Point>& ap_positions,
                        const std::vector<Point>& user_positions) {
  Topology topo;
  topo.ap_positions = ap_positions;
  topo.user_positions = user_positions;
  const auto K = static_cast<Eigen::Index>(user_positions.size());
  const auto M = static_cast<Eigen::Index>(ap_positions.size());
  topo.d.resize(K, M);
  for (Eigen::Index i = 0; i < K; ++i)
    for (Eigen::Index m = 0; m < M; ++m)
      topo.d(i, m) = std::hypot(user_positions[i].x - ap_positions[m].x,
                                user_positions[i].y - ap_positions[m].y);
  topo.d_user.resize(K, K);
  for (Eigen::Index i = 0; i < K; ++i) {
    topo.d_user(i, i) = 0.0;
    for (Eigen::Index k = i + 1; k < K; ++k) {
      const double dd = std::hypot(user_positions[i].x - user_positions[k].x,
                                   user_positions[i].y - user_positions[k].y);
      topo.d_user(i, k) = dd;
      topo.d_user(k, i) = dd;
    }
  }
  return topo;
}

Eigen::MatrixXd shadow_fading(std::uint64_t seed, const Topology& topo) {
  const auto K = topo.d_user.rows();
  const auto M = static_cast<Eigen::Index>(topo.ap_positions.size());
  Eigen::MatrixXd C(K, K);
  for (Eigen::Index i = 0; i < K; ++i)
    for (Eigen::Index k = 0; k < K; ++k)
      C(i, k) = 16.0 * std::exp2(-topo.d_user(i, k) / 9.0);
  const Eigen::MatrixXd L = covariance_factor(C);

  Rng rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd F(K, M);
  Eigen::VectorXd w(K);
  for (Eigen::Index m = 0; m < M; ++m) {
    for (Eigen::Index i = 0; i < K; ++i) w(i) = normal(rng);
    F.col(m) = L * w;
  }
  return F;
}

Eigen::MatrixXd large_scale(const Topology& topo, const Eigen::MatrixXd& F_dB, double min_dist) {
  if (F_dB.rows() != topo.d.rows() || F_dB.cols() != topo.d.cols())
    throw std::invalid_argument("large_scale: F shape must match the distance matrix");
  Eigen::MatrixXd beta(topo.d.rows(), topo.d.cols());
  for (Eigen::Index i = 0; i < topo.d.rows(); ++i)
    for (Eigen::Index m = 0; m < topo.d.cols(); ++m) {
      const double d = std::max(topo.d(i, m), min_dist);
      if (!(d > 0.0))
        throw std::invalid_argument("large_scale: zero user-AP distance; enforce a minimum");
      const double beta_dB = -30.5 - 36.7 * std::log10(d) + F_dB(i, m);
      beta(i, m) = std::pow(10.0, beta_dB / 10.0);
    }
  return beta;
}

double nominal_angle_deg(const Point& ap, const Point& user) {
  return std::atan2(user.x - ap.x, user.y - ap.y) * 180.0 / kPi;
}

Eigen::MatrixXcd spatial_correlation(double nominal_angle_deg, double asd_deg, int M_r) {
  if (M_r < 1) throw std::invalid_argument("spatial_correlation: M_r must be >= 1");
  const double phi = nominal_angle_deg * kPi / 180.0;
  const double asd = asd_deg * kPi / 180.0;
  Eigen::MatrixXcd R(M_r, M_r);
  for (int l = 0; l < M_r; ++l)
    for (int k = 0; k < M_r; ++k) {
      const double delta = kPi * (l - k);
      const double spread = asd * delta * std::cos(phi);
      R(l, k) = std::polar(std::exp(-0.5 * spread * spread), delta * std::sin(phi));
    }
  // The closed form is PSD; clip only if numerically indefinite.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(R);
  if (es.info() == Eigen::Success && es.eigenvalues().minCoeff() < -1e-12 * M_r) {
    const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
    R = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
  }
  return R;
}

Eigen::VectorXcd draw_small_scale(std::uint64_t seed, const Eigen::MatrixXcd& R) {
  Rng rng = make_rng(seed);
  return draw_small_scale(rng, R);
}

Eigen::VectorXcd draw_small_scale(Rng& rng, const Eigen::MatrixXcd& R) {
  const auto M_r = R.rows();
  Eigen::VectorXcd w(M_r);
  for (Eigen::Index a = 0; a < M_r; ++a) {
    const auto [re, im] = draw_circular_normal(rng);
    w(a) = cplx(re, im);
  }
  if (M_r == 1) return (std::sqrt(std::max(R(0, 0).real(), 0.0)) * w).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(R);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("draw_small_scale: eigendecomposition failed");
  const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * lam.cwiseSqrt().asDiagonal() * w;
}

ChannelRealization make_channel(std::uint64_t seed, const Topology& topo, int M_r,
                                double asd_deg, CorrelationModel model, double min_dist) {
  const auto K = topo.d.rows();
  const auto M = topo.d.cols();
  ChannelRealization ch;
  ch.beta = large_scale(topo, shadow_fading(derive_seed(seed, "shadow", 0), topo), min_dist);

  Rng rng = make_rng(derive_seed(seed, "smallscale", 0));
  ch.h.assign(M, Eigen::MatrixXcd(K, M_r));
  ch.g.assign(M, Eigen::MatrixXcd(K, M_r));
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(M_r, M_r);
  for (Eigen::Index m = 0; m < M; ++m) {
    for (Eigen::Index i = 0; i < K; ++i) {
      Eigen::VectorXcd h_im;
      if (model == CorrelationModel::kIdentity || M_r == 1) {
        h_im = draw_small_scale(rng, eye);
      } else {
        const double angle = nominal_angle_deg(topo.ap_positions[m], topo.user_positions[i]);
        h_im = draw_small_scale(rng, spatial_correlation(angle, asd_deg, M_r));
      }
      ch.h[m].row(i) = h_im.transpose();
      ch.g[m].row(i) = std::sqrt(ch.beta(i, m)) * h_im.transpose();
    }
  }
  return ch;
}

std::vector<Eigen::MatrixXcd> apply_channel(std::uint64_t seed, const Eigen::MatrixXcd& frames,
                                            const ChannelRealization& realization, double sigma2) {
  if (!(sigma2 >= 0.0)) throw std::invalid_argument("apply_channel: sigma2 must be >= 0");
  const auto M = static_cast<Eigen::Index>(realization.g.size());
  const auto n = frames.cols();
  const auto K = frames.rows();

  Rng rng = make_rng(seed);
  std::vector<Eigen::MatrixXcd> Y(M);
  const double noise_amp = std::sqrt(sigma2);
  for (Eigen::Index m = 0; m < M; ++m) {
    const auto M_r = realization.g[m].cols();
    if (realization.g[m].rows() != K)
      throw std::invalid_argument("apply_channel: frames/realization user count mismatch");
    Y[m].resize(n, M_r);
    for (Eigen::Index a = 0; a < M_r; ++a)
      for (Eigen::Index t = 0; t < n; ++t) {
        const auto [re, im] = draw_circular_normal(rng);
        Y[m](t, a) = noise_amp * cplx(re, im);
      }
    if (K > 0) Y[m].noalias() += frames.transpose() * realization.g[m];
  }
  return Y;
}

}  // namespace uracf
