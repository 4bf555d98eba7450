#pragma once

#include <string>

#include "maxjsr/jsr.hpp"

namespace testing {

using maxjsr::MatrixSet;
using maxjsr::MaxMatrix;

inline MaxMatrix paper_a1() {
  return {{1.0 / 3, 1.0 / 2, 1.0}, {3.0 / 4, 2.0 / 3, 1.0 / 5}, {3.0 / 5, 1.0 / 5, 0.0}};
}

inline MaxMatrix paper_a2() {
  return {{0.0, 1.0 / 4, 1.0 / 2}, {0.0, 4.0 / 5, 10.0 / 3}, {1.0 / 4, 0.0, 1.0 / 4}};
}

inline MatrixSet paper_set() { return MatrixSet::from_matrices({paper_a1(), paper_a2()}); }

inline MaxMatrix paper_aggregate() {
  return {{1.0 / 3, 1.0 / 2, 1.0}, {3.0 / 4, 4.0 / 5, 10.0 / 3}, {3.0 / 5, 1.0 / 5, 1.0 / 4}};
}

inline std::string data_file(const std::string& name) { return std::string(MAXJSR_TEST_DATA) + "/" + name; }

inline bool close(double a, double b, double rel = 1e-12) {
  const double scale = std::max({1.0, a < 0 ? -a : a, b < 0 ? -b : b});
  return (a > b ? a - b : b - a) <= rel * scale;
}

inline bool close(const MaxMatrix& a, const MaxMatrix& b, double rel = 1e-12) {
  if (a.dim() != b.dim()) return false;
  for (std::size_t k = 0; k < a.values().size(); ++k)
    if (!close(a.values()[k], b.values()[k], rel)) return false;
  return true;
}

}  // namespace testing
