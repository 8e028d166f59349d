#include "uracf/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <stdexcept>

#include "uracf/seeding.hpp"

namespace uracf {
namespace {

constexpr char kMagic[8] = {'U', 'R', 'A', 'C', 'B', 'K', '0', '1'};
constexpr std::uint64_t kDumpVersion = 1;

void write_u64(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t read_u64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

void write_f64(std::ostream& os, double d) {
  std::uint64_t v;
  std::memcpy(&v, &d, 8);
  write_u64(os, v);
}

double read_f64(std::istream& is) {
  const std::uint64_t v = read_u64(is);
  double d;
  std::memcpy(&d, &v, 8);
  return d;
}

}  // namespace

PilotCodebook generate_pilot_codebook(std::uint64_t seed, int n_p, long N, double P_p,
                                      bool complex_entries) {
  if (n_p < 1 || N < 1) throw std::invalid_argument("generate_pilot_codebook: need n_p, N >= 1");
  PilotCodebook cb;
  cb.P_p = P_p;
  cb.real_entries = !complex_entries;
  cb.A.resize(n_p, N);

  Rng rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double target = std::sqrt(static_cast<double>(n_p) * P_p);
  for (long c = 0; c < N; ++c) {
    for (int r = 0; r < n_p; ++r) {
      if (complex_entries) {
        const double re = normal(rng), im = normal(rng);
        cb.A(r, c) = cplx(re, im) * 0.7071067811865476;  // CN(0,1)
      } else {
        cb.A(r, c) = cplx(normal(rng), 0.0);
      }
    }
    const double norm = cb.A.col(c).norm();
    if (norm > 0.0) cb.A.col(c) *= target / norm;
  }
  if (cb.real_entries) cb.A_re = cb.A.real();
  return cb;
}

PatternMatrix generate_pattern_matrix(std::uint64_t seed, int n_data_slots, long N, int n_d) {
  if (n_d < 0 || n_d > n_data_slots)
    throw std::invalid_argument("generate_pattern_matrix: need 0 <= n_d <= n_data_slots");
  if (N < 1) throw std::invalid_argument("generate_pattern_matrix: need N >= 1");
  PatternMatrix pm;
  pm.n_d = n_d;
  pm.P.setZero(n_data_slots, N);
  pm.active_indices.resize(N);

  Rng rng = make_rng(seed);
  std::vector<int> pool(n_data_slots);
  for (long c = 0; c < N; ++c) {
    for (int i = 0; i < n_data_slots; ++i) pool[i] = i;
    for (int j = 0; j < n_d; ++j) {
      std::uniform_int_distribution<int> pick(j, n_data_slots - 1);
      std::swap(pool[j], pool[pick(rng)]);
    }
    auto& support = pm.active_indices[c];
    support.assign(pool.begin(), pool.begin() + n_d);
    std::sort(support.begin(), support.end());
    for (const int row : support) pm.P(row, c) = 1;
  }
  return pm;
}

long bits_to_index(const std::vector<std::uint8_t>& bits) {
  if (bits.empty() || bits.size() > 62)
    throw std::invalid_argument("bits_to_index: need 1..62 bits");
  long v = 0;
  for (const std::uint8_t b : bits) v = (v << 1) | (b & 1);
  return v;
}

std::vector<std::uint8_t> index_to_bits(long index, int B_p) {
  if (B_p < 1 || B_p > 62) throw std::invalid_argument("index_to_bits: need 1 <= B_p <= 62");
  if (index < 0 || index >= (1L << B_p))
    throw std::invalid_argument("index_to_bits: index out of range");
  std::vector<std::uint8_t> bits(B_p);
  for (int i = 0; i < B_p; ++i) bits[i] = static_cast<std::uint8_t>((index >> (B_p - 1 - i)) & 1);
  return bits;
}

void dump_codebook(const std::string& path, const PilotCodebook& cb, const PatternMatrix& pm) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("dump_codebook: cannot open '" + path + "'");
  os.write(kMagic, 8);
  write_u64(os, kDumpVersion);
  write_u64(os, static_cast<std::uint64_t>(cb.n_p()));
  write_u64(os, static_cast<std::uint64_t>(cb.N()));
  write_u64(os, static_cast<std::uint64_t>(pm.n_d));
  write_u64(os, static_cast<std::uint64_t>(pm.n_data_slots()));
  write_f64(os, cb.P_p);
  for (int r = 0; r < cb.n_p(); ++r)
    for (long c = 0; c < cb.N(); ++c) {
      write_f64(os, cb.A(r, c).real());
      write_f64(os, cb.A(r, c).imag());
    }
  unsigned char acc = 0;
  int fill = 0;
  for (int r = 0; r < pm.n_data_slots(); ++r)
    for (long c = 0; c < pm.N(); ++c) {
      acc |= static_cast<unsigned char>((pm.P(r, c) & 1) << fill);
      if (++fill == 8) {
        os.put(static_cast<char>(acc));
        acc = 0;
        fill = 0;
      }
    }
  if (fill > 0) os.put(static_cast<char>(acc));
  if (!os) throw std::runtime_error("dump_codebook: write failed for '" + path + "'");
}

std::pair<PilotCodebook, PatternMatrix> load_codebook(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("load_codebook: cannot open '" + path + "'");
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kMagic, 8) != 0)
    throw std::runtime_error("load_codebook: bad magic in '" + path + "'");
  const std::uint64_t version = read_u64(is);
  if (version != kDumpVersion)
    throw std::runtime_error("load_codebook: unsupported version " + std::to_string(version));
  const auto n_p = static_cast<long>(read_u64(is));
  const auto N = static_cast<long>(read_u64(is));
  const auto n_d = static_cast<int>(read_u64(is));
  const auto n_data_slots = static_cast<long>(read_u64(is));
  const double P_p = read_f64(is);
  if (n_p < 1 || N < 1 || n_data_slots < 0 || n_d < 0 || n_d > n_data_slots)
    throw std::runtime_error("load_codebook: inconsistent header in '" + path + "'");

  PilotCodebook cb;
  cb.P_p = P_p;
  cb.A.resize(n_p, N);
  bool any_imag = false;
  for (long r = 0; r < n_p; ++r)
    for (long c = 0; c < N; ++c) {
      const double re = read_f64(is);
      const double im = read_f64(is);
      cb.A(r, c) = cplx(re, im);
      any_imag = any_imag || im != 0.0;
    }
  cb.real_entries = !any_imag;
  if (cb.real_entries) cb.A_re = cb.A.real();

  PatternMatrix pm;
  pm.n_d = n_d;
  pm.P.setZero(n_data_slots, N);
  pm.active_indices.assign(N, {});
  unsigned char acc = 0;
  int fill = 8;
  for (long r = 0; r < n_data_slots; ++r)
    for (long c = 0; c < N; ++c) {
      if (fill == 8) {
        int byte = is.get();
        if (byte < 0) throw std::runtime_error("load_codebook: truncated file '" + path + "'");
        acc = static_cast<unsigned char>(byte);
        fill = 0;
      }
      pm.P(r, c) = (acc >> fill) & 1;
      ++fill;
    }
  if (!is) throw std::runtime_error("load_codebook: truncated file '" + path + "'");
  for (long c = 0; c < N; ++c) {
    auto& support = pm.active_indices[c];
    for (long r = 0; r < n_data_slots; ++r)
      if (pm.P(r, c)) support.push_back(static_cast<int>(r));
    if (static_cast<int>(support.size()) != n_d)
      throw std::runtime_error("load_codebook: column support size mismatch in '" + path + "'");
  }
  return {std::move(cb), std::move(pm)};
}

}  // namespace uracf
