#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "fillgeo/square_complex.hpp"

namespace fillgeo::test {

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline std::string data_path(const std::string& name) {
  return std::string(FILLGEO_TEST_DATA) + "/" + name;
}

inline SquareComplex fixture(const std::string& name) {
  return parse_complex(slurp(data_path(name)));
}

// Every orientable pairing of the 2n slots, in slot-code order.
template <class F>
void for_each_orientable(int n, F&& visit) {
  std::vector<int> partner(2 * n, -1);
  auto rec = [&](auto&& self) -> void {
    int s = 0;
    while (s < 2 * n && partner[s] >= 0) ++s;
    if (s == 2 * n) {
      std::vector<SquareComplex::Pair> pairs;
      for (int c = 0; c < 2 * n; ++c)
        if (c < partner[c])
          pairs.push_back({SlotId::from_code(c), SlotId::from_code(partner[c]),
                           (c & 1) == (partner[c] & 1)});
      visit(SquareComplex(n, pairs));
      return;
    }
    for (int p = s + 1; p < 2 * n; ++p) {
      if (partner[p] >= 0) continue;
      partner[s] = p;
      partner[p] = s;
      self(self);
      partner[s] = partner[p] = -1;
    }
  };
  rec(rec);
}

}  // namespace fillgeo::test
