#include <algorithm>
#include <random>

#include <doctest.h>

#include "oracles.hpp"
#include "uracf/ap_receiver.hpp"
#include "uracf/seeding.hpp"

using namespace uracf;

namespace {

Eigen::MatrixXcd random_complex(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> gauss(0.0, M_SQRT1_2);
  Eigen::MatrixXcd M(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) M(i, j) = cplx(gauss(rng), gauss(rng));
  return M;
}

std::vector<long> sorted(std::vector<long> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("ap_receiver: Gram matches direct products") {
  const auto cb = generate_pilot_codebook(51, 32, 64, 0.01);
  const PilotGram gram = build_pilot_gram(cb);
  REQUIRE(gram.is_real);
  REQUIRE(gram.N() == 64);
  const Eigen::MatrixXd direct = (cb.A.adjoint() * cb.A).real();
  CHECK((gram.real - direct).cwiseAbs().maxCoeff() < 1e-12);

  const auto cx = generate_pilot_codebook(51, 32, 64, 0.01, true);
  const PilotGram gram_cx = build_pilot_gram(cx);
  REQUIRE_FALSE(gram_cx.is_real);
  CHECK((gram_cx.cx - cx.A.adjoint() * cx.A).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("ap_receiver: pilot correlation fast path equals the definition") {
  std::mt19937_64 rng(52);
  for (const bool complex_entries : {false, true}) {
    const auto cb = generate_pilot_codebook(53, 24, 40, 0.01, complex_entries);
    const Eigen::MatrixXcd Y = random_complex(rng, 24, 3);
    const Eigen::MatrixXcd R = pilot_correlate(cb, Y);
    CHECK((R - cb.A.adjoint() * Y).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("ap_receiver: OMP recovers planted supports exactly (noiseless)") {
  std::mt19937_64 rng(53);
  const auto cb = generate_pilot_codebook(54, 32, 64, 1.0);
  int hits = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<long> support;
    while (support.size() < 3) {
      const long c = static_cast<long>(rng() % 64);
      if (std::find(support.begin(), support.end(), c) == support.end()) support.push_back(c);
    }
    const Eigen::MatrixXcd G = random_complex(rng, 3, 2);
    Eigen::MatrixXcd Y = Eigen::MatrixXcd::Zero(32, 2);
    for (int u = 0; u < 3; ++u) Y += cb.A.col(support[u]) * G.row(u);
    const OmpResult res = omp_detect(Y, cb, 3, 1e-9);
    if (sorted(res.detected) == sorted(support)) {
      ++hits;
      // channel estimates match the planted gains in the detected order
      for (std::size_t i = 0; i < res.detected.size(); ++i) {
        const auto it = std::find(support.begin(), support.end(), res.detected[i]);
        const long u = it - support.begin();
        CHECK((res.G_hat.row(i) - G.row(u)).norm() < 1e-6);
      }
    }
  }
  CHECK(hits >= 48);  // 32x64 is a harsh dictionary; near-perfect is expected
}

TEST_CASE("ap_receiver: OMP honors ties, exclusions, and distinctness") {
  auto cb = generate_pilot_codebook(55, 16, 12, 1.0);
  cb.A.col(9) = cb.A.col(5);  // duplicated column
  if (cb.real_entries) cb.A_re.col(9) = cb.A_re.col(5);
  const Eigen::MatrixXcd Y = cb.A.col(5) * Eigen::RowVector2cd(1.0, 0.5);

  const OmpResult tie = omp_detect(Y, cb, 1, 1e-9);
  REQUIRE(tie.detected.size() == 1);
  CHECK(tie.detected[0] == 5);  // exact tie resolves to the lowest index

  std::vector<char> excluded(12, 0);
  excluded[5] = 1;
  const OmpResult excl = omp_detect(Y, cb, 1, 1e-9, nullptr, nullptr, &excluded);
  REQUIRE(excl.detected.size() == 1);
  CHECK(excl.detected[0] == 9);

  // more slots than planted users: indices never repeat
  const OmpResult over = omp_detect(Y, cb, 6, 1e-9);
  std::vector<long> uniq = sorted(over.detected);
  CHECK(std::adjacent_find(uniq.begin(), uniq.end()) == uniq.end());
}

TEST_CASE("ap_receiver: OMP incremental Gram path equals the direct path") {
  std::mt19937_64 rng(56);
  const auto cb = generate_pilot_codebook(57, 48, 96, 0.01);
  const PilotGram gram = build_pilot_gram(cb);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXcd Y = random_complex(rng, 48, 2) * 0.05;
    std::vector<long> support;
    while (support.size() < 4) {
      const long c = static_cast<long>(rng() % 96);
      if (std::find(support.begin(), support.end(), c) == support.end()) support.push_back(c);
    }
    for (const long s : support) Y += cb.A.col(s) * random_complex(rng, 1, 2);
    const Eigen::MatrixXcd R0 = pilot_correlate(cb, Y);

    const OmpResult direct = omp_detect(Y, cb, 4, 1e-6);
    const OmpResult cached = omp_detect(Y, cb, 4, 1e-6, &gram, &R0);
    REQUIRE(direct.detected == cached.detected);
    CHECK((direct.G_hat - cached.G_hat).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("ap_receiver: LMMSE equalizer matches the dense-inverse oracle") {
  std::mt19937_64 rng(58);
  for (int trial = 0; trial < 10; ++trial) {
    const int K = 1 + static_cast<int>(rng() % 4);
    const int M_r = 1 + static_cast<int>(rng() % 4);
    const int n_data = 20;
    const double sigma2 = 0.1, P_d = 2.0;
    const Eigen::MatrixXcd G = random_complex(rng, K, M_r);
    const Eigen::MatrixXcd Y = random_complex(rng, n_data, M_r);

    std::vector<std::vector<int>> pats(K);
    std::vector<const std::vector<int>*> pat_ptrs;
    for (int u = 0; u < K; ++u) {
      for (int t = u; t < u + 16; t += 2) pats[u].push_back(t);  // 8 slots each
      pat_ptrs.push_back(&pats[u]);
    }
    const Eigen::MatrixXcd C = lmmse_symbols(Y, G, sigma2, P_d, pat_ptrs);

    const Eigen::MatrixXcd M =
        G.adjoint() * G +
        (sigma2 / P_d) * Eigen::MatrixXcd::Identity(M_r, M_r);
    const Eigen::MatrixXcd W = oracle::gauss_jordan_inverse(M) * G.adjoint();
    const Eigen::MatrixXcd C_full = Y * W;
    for (int u = 0; u < K; ++u)
      for (std::size_t s = 0; s < pats[u].size(); ++s) {
        const cplx want = C_full(pats[u][s], u);
        CHECK(std::abs(C(s, u) - want) <= 1e-9 * std::max(1.0, std::abs(want)));
      }
  }
}

TEST_CASE("ap_receiver: LMMSE output follows a user permutation") {
  std::mt19937_64 rng(59);
  const int K = 3, M_r = 2, n_data = 12;
  const Eigen::MatrixXcd G = random_complex(rng, K, M_r);
  const Eigen::MatrixXcd Y = random_complex(rng, n_data, M_r);
  std::vector<std::vector<int>> pats = {{0, 2, 4}, {1, 3, 5}, {6, 7, 8}};
  std::vector<const std::vector<int>*> fwd = {&pats[0], &pats[1], &pats[2]};
  std::vector<const std::vector<int>*> rev = {&pats[2], &pats[1], &pats[0]};
  Eigen::MatrixXcd G_rev(K, M_r);
  G_rev.row(0) = G.row(2);
  G_rev.row(1) = G.row(1);
  G_rev.row(2) = G.row(0);
  const Eigen::MatrixXcd A = lmmse_symbols(Y, G, 0.1, 1.0, fwd);
  const Eigen::MatrixXcd B = lmmse_symbols(Y, G_rev, 0.1, 1.0, rev);
  CHECK((A.col(0) - B.col(2)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((A.col(2) - B.col(0)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("ap_receiver: LMMSE edge cases") {
  const Eigen::MatrixXcd Y = Eigen::MatrixXcd::Ones(6, 2);
  CHECK(lmmse_symbols(Y, Eigen::MatrixXcd(0, 2), 0.1, 1.0, {}).size() == 0);
  std::vector<int> pat = {0, 1, 2};
  const Eigen::MatrixXcd G = Eigen::MatrixXcd::Ones(1, 2);
  const Eigen::MatrixXcd C = lmmse_symbols(Y, G, 0.1, 0.0, {&pat});
  CHECK(C.cwiseAbs().maxCoeff() == 0.0);  // zero data power estimates nothing
}

TEST_CASE("ap_receiver: SIC cancels detected frames exactly and only those") {
  std::mt19937_64 rng(60);
  const int n = 40, M_r = 2;
  const Eigen::VectorXcd x1 = random_complex(rng, n, 1);
  const Eigen::VectorXcd x2 = random_complex(rng, n, 1);
  Eigen::MatrixXcd G_hat = random_complex(rng, 2, M_r);
  const Eigen::MatrixXcd noise = random_complex(rng, n, M_r);

  Eigen::MatrixXcd Y = x1 * G_hat.row(0) + x2 * G_hat.row(1) + noise;
  const Eigen::MatrixXcd Y_orig = Y;

  // this AP detected only pilot 4 (user 1); pilot 9 (user 2) stays untouched
  std::vector<std::pair<long, const Eigen::VectorXcd*>> decoded = {{4, &x1}, {9, &x2}};
  sic_subtract(Y, decoded, G_hat, {4});
  CHECK((Y - (x2 * G_hat.row(1) + noise)).cwiseAbs().maxCoeff() < 1e-12);

  // detected order defines the G_hat row: swap detection to user 2
  Eigen::MatrixXcd Y2 = Y_orig;
  Eigen::MatrixXcd G_hat2(2, M_r);
  G_hat2.row(0) = G_hat.row(1);  // row u follows the detected list
  G_hat2.row(1) = G_hat.row(0);
  sic_subtract(Y2, decoded, G_hat2, {9, 4});
  CHECK((Y2 - noise).cwiseAbs().maxCoeff() < 1e-12);

  // nothing detected: bit-exact no-op
  Eigen::MatrixXcd Y3 = Y_orig;
  sic_subtract(Y3, decoded, G_hat, {});
  CHECK((Y3.array() == Y_orig.array()).all());
}
