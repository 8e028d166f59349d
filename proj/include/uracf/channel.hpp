#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "uracf/config.hpp"
#include "uracf/modem.hpp"
#include "uracf/seeding.hpp"

namespace uracf {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// AP/user placement and the derived distance matrices.
struct Topology {
  std::vector<Point> ap_positions;
  std::vector<Point> user_positions;
  Eigen::MatrixXd d;       ///< K_a × M user–AP distances, meters
  Eigen::MatrixXd d_user;  ///< K_a × K_a inter-user distances, meters
};

/// Quasi-static channel: one draw per frame. g[m] row i is g_{i,m}^T, the
/// M_r-vector from user i to AP m, with g = √β·h elementwise.
struct ChannelRealization {
  Eigen::MatrixXd beta;             ///< K_a × M, linear scale
  std::vector<Eigen::MatrixXcd> h;  ///< per AP: K_a × M_r small-scale fading
  std::vector<Eigen::MatrixXcd> g;  ///< per AP: K_a × M_r effective channel
};

/// count i.i.d. uniform points on [0, D]².
std::vector<Point> place_points(std::uint64_t seed, int count, double D);

Topology build_topology(const std::vector<Point>& ap_positions,
                        const std::vector<Point>& user_positions);

/// K_a × M shadow-fading values in dB. Per AP column: zero-mean Gaussian with
/// Cov(F_i, F_k) = 16·2^{−d'_{ik}/9}; columns independent across APs.
/// Factorization: Cholesky, falling back to eigenvalue clipping at zero.
Eigen::MatrixXd shadow_fading(std::uint64_t seed, const Topology& topo);

/// Urban-microcell path loss: β_dB = −30.5 − 36.7·log10(max(d, min_dist)) + F,
/// returned in linear scale. Throws if any effective distance is zero.
Eigen::MatrixXd large_scale(const Topology& topo, const Eigen::MatrixXd& F_dB,
                            double min_dist = 1.0);

/// Gaussian local-scattering correlation for a half-wavelength ULA:
/// R_{l,k} = exp(jπ(l−k)sinφ)·exp(−(asd²/2)·(π(l−k)cosφ)²), unit diagonal,
/// Hermitian, eigenvalue-clipped at zero if numerically indefinite.
Eigen::MatrixXcd spatial_correlation(double nominal_angle_deg, double asd_deg, int M_r);

/// Azimuth of `user` seen from `ap`, measured from ULA broadside (arrays are
/// aligned with the x-axis, so broadside points along +y). Degrees.
double nominal_angle_deg(const Point& ap, const Point& user);

/// h = U·√Λ·w with R = U·Λ·U^H and w i.i.d. CN(0,1); E[h h^H] = R.
Eigen::VectorXcd draw_small_scale(Rng& rng, const Eigen::MatrixXcd& R);
Eigen::VectorXcd draw_small_scale(std::uint64_t seed, const Eigen::MatrixXcd& R);

/// Composite: shadowing → path loss → per-(user, AP) correlated small-scale
/// draws, with the nominal angle taken from the topology geometry.
ChannelRealization make_channel(std::uint64_t seed, const Topology& topo, int M_r,
                                double asd_deg, CorrelationModel model,
                                double min_dist = 1.0);

/// Y_m = Σ_i x_i·g_{i,m}^T + Z_m with Z entries i.i.d. CN(0, σ²).
/// frames: K_a × n (row per user). Returns M matrices of shape n × M_r.
std::vector<Eigen::MatrixXcd> apply_channel(std::uint64_t seed, const Eigen::MatrixXcd& frames,
                                            const ChannelRealization& realization, double sigma2);

}  // namespace uracf
