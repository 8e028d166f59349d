#include <cmath>
#include <random>

#include <doctest.h>

#include "uracf/modem.hpp"

using namespace uracf;

TEST_CASE("modem: QPSK mapping and per-symbol energy") {
  const double P_d = 0.01;
  const SymbolVector sv = qpsk_modulate({0, 0, 0, 1, 1, 0, 1, 1}, P_d);
  REQUIRE(sv.values.size() == 4);
  CHECK(sv.power == P_d);
  const double a = std::sqrt(P_d / 2.0);
  CHECK(sv.values[0] == cplx(a, a));    // 00
  CHECK(sv.values[1] == cplx(a, -a));   // 01
  CHECK(sv.values[2] == cplx(-a, a));   // 10
  CHECK(sv.values[3] == cplx(-a, -a));  // 11
  for (const auto& v : sv.values) CHECK(std::norm(v) == doctest::Approx(P_d).epsilon(1e-12));
}

TEST_CASE("modem: LLR signs invert the mapping and scale as 2*sqrt(2)") {
  std::mt19937_64 rng(21);
  std::vector<std::uint8_t> bits(64);
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1);
  const auto sv = qpsk_modulate(bits, 2.0);
  const double noise_scale = 0.37;
  const auto llrs = qpsk_llr(sv.values, noise_scale);
  REQUIRE(llrs.size() == bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    CHECK((llrs[i] > 0) == (bits[i] == 0));  // positive LLR means bit 0
    // |symbol component| = sqrt(P_d/2) = 1, so |LLR| = 2*sqrt(2)/noise_scale
    CHECK(std::abs(llrs[i]) == doctest::Approx(2.0 * std::sqrt(2.0) / noise_scale).epsilon(1e-12));
  }
}

TEST_CASE("modem: hard decisions survive sub-threshold noise") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> jitter(-0.4, 0.4);
  std::vector<std::uint8_t> bits(200);
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1);
  auto sv = qpsk_modulate(bits, 2.0);  // components at +/-1
  for (auto& v : sv.values) v += cplx(jitter(rng), jitter(rng));
  const auto llrs = qpsk_llr(sv.values, 1.0);
  for (std::size_t i = 0; i < bits.size(); ++i) CHECK((llrs[i] < 0) == (bits[i] == 1));
}

TEST_CASE("modem: contract violations throw") {
  CHECK_THROWS(qpsk_modulate({0, 1, 0}, 1.0));  // odd bit count
  CHECK_THROWS(qpsk_llr({cplx(1.0, 1.0)}, 0.0));
  CHECK_THROWS(qpsk_llr({cplx(1.0, 1.0)}, -1.0));
}
