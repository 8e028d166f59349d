#include "uracf/polar.hpp"

#include <fstream>
#include <stdexcept>

namespace uracf {

std::vector<int> load_reliability_sequence(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("reliability sequence: cannot open '" + path + "'");
  std::vector<int> seq;
  seq.reserve(1024);
  int v = 0;
  while (in >> v) seq.push_back(v);
  if (!in.eof())
    throw std::runtime_error("reliability sequence: non-integer content in '" + path + "'");
  if (seq.size() != 1024)
    throw std::runtime_error("reliability sequence: expected 1024 entries, got " +
                             std::to_string(seq.size()));
  std::vector<bool> seen(1024, false);
  for (const int x : seq) {
    if (x < 0 || x >= 1024 || seen[x])
      throw std::runtime_error("reliability sequence: not a permutation of 0..1023");
    seen[x] = true;
  }
  return seq;
}

const std::vector<int>& reliability_sequence() {
  static const std::vector<int> seq =
      load_reliability_sequence(std::string(URACF_DATA_DIR) + "/nr_polar_reliability_1024_v1.txt");
  return seq;
}

}  // namespace uracf
