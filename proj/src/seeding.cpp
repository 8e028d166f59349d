#include "uracf/seeding.hpp"

namespace uracf {

namespace {

// splitmix64 finalizer; full avalanche on 64 bits.
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view stream_label,
                          std::uint64_t index) {
  // FNV-1a over the label keeps distinct stream names apart even when they
  // share a prefix.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : stream_label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::uint64_t z = mix64(master_seed ^ mix64(h));
  return mix64(z ^ mix64(index));
}

double draw_standard_normal(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  return normal(rng);
}

std::pair<double, double> draw_circular_normal(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = 0.7071067811865476;  // 1/sqrt(2)
  double re = normal(rng) * scale;
  double im = normal(rng) * scale;
  return {re, im};
}

}  // namespace uracf
