#include <random>

#include <doctest.h>

#include "uracf/seeding.hpp"
#include "uracf/tx_chain.hpp"

using namespace uracf;

namespace {

// Small but complete system: B_p = 5 (N = 32 pilots), payload 16 bits + CRC 16
// on a length-64 polar code, 32 QPSK symbols into 100 data slots.
struct SmallSystem {
  PilotCodebook cb = generate_pilot_codebook(derive_seed(77, "pilot", 0), 48, 32, 0.01);
  PatternMatrix pm = generate_pattern_matrix(derive_seed(77, "pattern", 0), 100, 32, 32);
  PolarCodeSpec polar = construct_info_set(64, 32);
  CrcSpec crc{16, 0x1021, 0, 0, false};
  double P_d = 0.01;

  Message message(std::mt19937_64& rng) const {
    Message msg;
    msg.bits.resize(5 + 16);
    for (auto& b : msg.bits) b = static_cast<std::uint8_t>(rng() & 1);
    return msg;
  }
};

}  // namespace

TEST_CASE("tx_chain: frame energy splits into pilot and data budgets") {
  SmallSystem sys;
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10; ++i) {
    const UserFrame f = encode_user(sys.message(rng), sys.cb, sys.pm, sys.polar, sys.crc, sys.P_d);
    REQUIRE(f.signal.size() == 148);
    const double expected = 48 * 0.01 + 32 * 0.01;  // n_p*P_p + n_d*P_d
    CHECK(f.signal.squaredNorm() == doctest::Approx(expected).epsilon(1e-9));
    CHECK(f.signal.head(48).squaredNorm() == doctest::Approx(48 * 0.01).epsilon(1e-9));
  }
}

TEST_CASE("tx_chain: pilot head is the addressed codebook column") {
  SmallSystem sys;
  std::mt19937_64 rng(2);
  const Message msg = sys.message(rng);
  const UserFrame f = encode_user(msg, sys.cb, sys.pm, sys.polar, sys.crc, sys.P_d);
  const std::vector<std::uint8_t> head(msg.bits.begin(), msg.bits.begin() + 5);
  CHECK(f.pilot_index == bits_to_index(head));
  CHECK((f.signal.head(48) - sys.cb.A.col(f.pilot_index)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("tx_chain: data symbols sit exactly on the pilot's pattern") {
  SmallSystem sys;
  std::mt19937_64 rng(3);
  const Message msg = sys.message(rng);
  const UserFrame f = encode_user(msg, sys.cb, sys.pm, sys.polar, sys.crc, sys.P_d);
  CHECK(f.pattern == sys.pm.active_indices[f.pilot_index]);
  REQUIRE(f.codeword_symbols.values.size() == 32);
  std::size_t next = 0;
  for (int t = 0; t < 100; ++t) {
    const cplx v = f.signal(48 + t);
    if (next < f.pattern.size() && f.pattern[next] == t) {
      CHECK(v == f.codeword_symbols.values[next]);
      ++next;
    } else {
      CHECK(v == cplx(0.0, 0.0));
    }
  }
  CHECK(next == f.pattern.size());

  // the symbols are the modulated CRC-protected polar codeword
  const std::vector<std::uint8_t> payload(msg.bits.begin() + 5, msg.bits.end());
  const auto codeword = polar_encode(crc_attach(payload, sys.crc), sys.polar);
  const auto symbols = qpsk_modulate(codeword, sys.P_d);
  for (std::size_t i = 0; i < symbols.values.size(); ++i)
    CHECK(f.codeword_symbols.values[i] == symbols.values[i]);
}

TEST_CASE("tx_chain: users sharing a pilot share pattern, not payload") {
  SmallSystem sys;
  std::mt19937_64 rng(4);
  Message a = sys.message(rng);
  Message b = sys.message(rng);
  std::copy(a.bits.begin(), a.bits.begin() + 5, b.bits.begin());
  b.bits[10] = static_cast<std::uint8_t>(1 - a.bits[10]);  // differ somewhere in the payload
  const UserFrame fa = encode_user(a, sys.cb, sys.pm, sys.polar, sys.crc, sys.P_d);
  const UserFrame fb = encode_user(b, sys.cb, sys.pm, sys.polar, sys.crc, sys.P_d);
  CHECK(fa.pilot_index == fb.pilot_index);
  CHECK(fa.pattern == fb.pattern);
  bool same_symbols = true;
  for (std::size_t i = 0; i < fa.codeword_symbols.values.size(); ++i)
    if (fa.codeword_symbols.values[i] != fb.codeword_symbols.values[i]) same_symbols = false;
  CHECK_FALSE(same_symbols);
}

TEST_CASE("tx_chain: wrong message length throws") {
  SmallSystem sys;
  Message bad;
  bad.bits.assign(7, 0);
  CHECK_THROWS(encode_user(bad, sys.cb, sys.pm, sys.polar, sys.crc, sys.P_d));
}
