#include "uracf/polar.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uracf {
namespace {

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

double f_minsum(double a, double b) {
  const double mag = std::min(std::fabs(a), std::fabs(b));
  return ((a < 0.0) != (b < 0.0)) ? -mag : mag;
}

double g_combine(double a, double b, std::uint8_t u) { return u ? b - a : b + a; }

/// One SCL path: per-level LLR banks (levels 1..m; level 0 is the shared
/// channel vector), two partial-sum bit banks per level 0..m, the decided
/// info bits, and the path metric.
struct Path {
  std::vector<double> llr;
  std::vector<std::uint8_t> bits;
  std::vector<std::uint8_t> u_hist;
  double pm = 0.0;
  bool active = false;
};

class SclDecoder {
 public:
  SclDecoder(const PolarCodeSpec& spec, const CrcSpec& crc, int L_list)
      : spec_(spec), crc_(crc), L_(L_list) {
    m_ = 0;
    while ((1 << m_) < spec_.n_c) ++m_;
    // llr banks: level s in [1, m], length 2^{m-s}; bit banks: level s in
    // [0, m], two banks of length 2^{m-s} each.
    llr_off_.assign(m_ + 1, 0);
    bit_off_.assign(m_ + 1, 0);
    int acc = 0;
    for (int s = 1; s <= m_; ++s) {
      llr_off_[s] = acc;
      acc += 1 << (m_ - s);
    }
    llr_size_ = acc;
    acc = 0;
    for (int s = 0; s <= m_; ++s) {
      bit_off_[s] = acc;
      acc += 2 * (1 << (m_ - s));
    }
    bit_size_ = acc;
  }

  std::optional<std::vector<std::uint8_t>> decode(const std::vector<double>& channel_llrs) {
    channel_ = channel_llrs.data();
    paths_.assign(static_cast<std::size_t>(L_), Path{});
    for (auto& p : paths_) {
      p.llr.assign(llr_size_, 0.0);
      p.bits.assign(bit_size_, 0);
      p.u_hist.reserve(spec_.k);
    }
    paths_[0].active = true;
    free_slots_.clear();
    for (int i = L_ - 1; i >= 1; --i) free_slots_.push_back(i);

    std::vector<bool> is_info(spec_.n_c, false);
    for (const int i : spec_.info_set) is_info[i] = true;

    for (int phi = 0; phi < spec_.n_c; ++phi) {
      for (int p = 0; p < L_; ++p)
        if (paths_[p].active) calc_llr(paths_[p], m_, phi);

      if (!is_info[phi]) {
        for (int p = 0; p < L_; ++p) {
          if (!paths_[p].active) continue;
          const double l = leaf_llr(paths_[p]);
          if (l < 0.0) paths_[p].pm -= l;
          paths_[p].bits[bit_off_[m_] + (phi & 1)] = 0;
        }
      } else {
        split_paths(phi);
      }

      if (phi & 1)
        for (int p = 0; p < L_; ++p)
          if (paths_[p].active) update_bits(paths_[p], m_, phi);
    }

    int best = -1;
    for (int p = 0; p < L_; ++p) {
      if (!paths_[p].active) continue;
      if (!crc_check(paths_[p].u_hist, crc_)) continue;
      if (best < 0 || paths_[p].pm < paths_[best].pm) best = p;
    }
    if (best < 0) return std::nullopt;
    const auto& u = paths_[best].u_hist;
    return std::vector<std::uint8_t>(u.begin(), u.end() - crc_.width);
  }

 private:
  double leaf_llr(const Path& p) const {
    return m_ == 0 ? channel_[0] : p.llr[llr_off_[m_]];
  }

  /// Recomputes the level-s LLR bank for phase phi (phase counted at level s).
  void calc_llr(Path& p, int s, int phi) {
    if (s == 0) return;
    if ((phi & 1) == 0 && s > 1) calc_llr(p, s - 1, phi >> 1);
    const int len = 1 << (m_ - s);
    const double* src = (s == 1) ? channel_ : p.llr.data() + llr_off_[s - 1];
    double* dst = p.llr.data() + llr_off_[s];
    if ((phi & 1) == 0) {
      for (int b = 0; b < len; ++b) dst[b] = f_minsum(src[b], src[b + len]);
    } else {
      const std::uint8_t* c = p.bits.data() + bit_off_[s];  // even-sibling bank
      for (int b = 0; b < len; ++b) dst[b] = g_combine(src[b], src[b + len], c[b]);
    }
  }

  /// Propagates partial sums upward after an odd phase at level s.
  void update_bits(Path& p, int s, int phi) {
    const int len = 1 << (m_ - s);
    const int psi = phi >> 1;
    const std::uint8_t* even = p.bits.data() + bit_off_[s];
    const std::uint8_t* odd = even + len;
    std::uint8_t* up = p.bits.data() + bit_off_[s - 1] + (psi & 1) * (2 * len);
    for (int b = 0; b < len; ++b) {
      up[b] = even[b] ^ odd[b];
      up[b + len] = odd[b];
    }
    if ((psi & 1) && s > 1) update_bits(p, s - 1, psi);
  }

  void set_leaf(Path& p, int phi, std::uint8_t bit, double pm) {
    p.bits[bit_off_[m_] + (phi & 1)] = bit;
    p.u_hist.push_back(bit);
    p.pm = pm;
  }

  void split_paths(int phi) {
    struct Cand {
      double pm;
      int parent;
      std::uint8_t bit;
    };
    std::vector<Cand> cands;
    cands.reserve(2 * paths_.size());
    for (int p = 0; p < L_; ++p) {
      if (!paths_[p].active) continue;
      const double l = leaf_llr(paths_[p]);
      cands.push_back({paths_[p].pm + std::max(-l, 0.0), p, 0});
      cands.push_back({paths_[p].pm + std::max(l, 0.0), p, 1});
    }
    if (static_cast<int>(cands.size()) > L_) {
      std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.pm != b.pm) return a.pm < b.pm;
        if (a.parent != b.parent) return a.parent < b.parent;
        return a.bit < b.bit;
      });
      cands.resize(L_);
    }

    std::vector<int> kept_bits(L_, 0), kept_mask(L_, 0);
    for (const auto& c : cands) {
      ++kept_bits[c.parent];
      kept_mask[c.parent] |= 1 << c.bit;
    }
    std::vector<double> pm_of(L_ * 2, 0.0);
    for (const auto& c : cands) pm_of[c.parent * 2 + c.bit] = c.pm;

    for (int p = 0; p < L_; ++p)
      if (paths_[p].active && kept_bits[p] == 0) {
        paths_[p].active = false;
        paths_[p].u_hist.clear();
        free_slots_.push_back(p);
      }

    for (int p = 0; p < L_; ++p) {
      if (!paths_[p].active || kept_bits[p] == 0) continue;
      if (kept_bits[p] == 1) {
        const std::uint8_t bit = (kept_mask[p] & 1) ? 0 : 1;
        set_leaf(paths_[p], phi, bit, pm_of[p * 2 + bit]);
      } else {
        const int q = free_slots_.back();
        free_slots_.pop_back();
        paths_[q].llr = paths_[p].llr;
        paths_[q].bits = paths_[p].bits;
        paths_[q].u_hist = paths_[p].u_hist;
        paths_[q].active = true;
        set_leaf(paths_[q], phi, 1, pm_of[p * 2 + 1]);
        set_leaf(paths_[p], phi, 0, pm_of[p * 2 + 0]);
      }
    }
  }

  const PolarCodeSpec& spec_;
  const CrcSpec& crc_;
  const int L_;
  int m_ = 0;
  int llr_size_ = 0, bit_size_ = 0;
  std::vector<int> llr_off_, bit_off_;
  const double* channel_ = nullptr;
  std::vector<Path> paths_;
  std::vector<int> free_slots_;
};

}  // namespace

PolarCodeSpec construct_info_set(int n_c, int k, const std::vector<int>& sequence) {
  if (!is_power_of_two(n_c) || n_c > 1024)
    throw std::invalid_argument("construct_info_set: n_c must be a power of two <= 1024");
  if (k < 0 || k > n_c)
    throw std::invalid_argument("construct_info_set: need 0 <= k <= n_c");
  std::vector<int> restricted;
  restricted.reserve(n_c);
  for (const int idx : sequence)
    if (idx < n_c) restricted.push_back(idx);
  if (static_cast<int>(restricted.size()) != n_c)
    throw std::invalid_argument("construct_info_set: sequence does not cover 0..n_c-1");

  PolarCodeSpec spec;
  spec.n_c = n_c;
  spec.k = k;
  spec.info_set.assign(restricted.end() - k, restricted.end());
  std::sort(spec.info_set.begin(), spec.info_set.end());
  return spec;
}

PolarCodeSpec construct_info_set(int n_c, int k) {
  return construct_info_set(n_c, k, reliability_sequence());
}

std::vector<std::uint8_t> polar_encode(const std::vector<std::uint8_t>& info_bits,
                                       const PolarCodeSpec& spec) {
  if (info_bits.size() != static_cast<std::size_t>(spec.k))
    throw std::invalid_argument("polar_encode: |info_bits| != k");
  std::vector<std::uint8_t> x(spec.n_c, 0);
  for (std::size_t i = 0; i < info_bits.size(); ++i) x[spec.info_set[i]] = info_bits[i] & 1;
  for (int len = 1; len < spec.n_c; len <<= 1)
    for (int i = 0; i < spec.n_c; i += 2 * len)
      for (int j = i; j < i + len; ++j) x[j] ^= x[j + len];
  return x;
}

std::optional<std::vector<std::uint8_t>> scl_decode(const std::vector<double>& llrs,
                                                    const PolarCodeSpec& spec,
                                                    const CrcSpec& crc, int L_list) {
  if (llrs.size() != static_cast<std::size_t>(spec.n_c))
    throw std::invalid_argument("scl_decode: |llrs| != n_c");
  if (L_list < 1) throw std::invalid_argument("scl_decode: L_list must be >= 1");
  if (crc.width > spec.k) throw std::invalid_argument("scl_decode: CRC wider than k");
  SclDecoder dec(spec, crc, L_list);
  return dec.decode(llrs);
}

}  // namespace uracf
