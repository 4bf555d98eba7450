#pragma once

#include <algorithm>
#include <cmath>

namespace maxjsr {

inline constexpr double kDefaultTau = 1e-9;

/// Relative tolerance shared by every comparison in the library:
/// a and b are equal iff |a - b| <= tau * max(1, |a|, |b|).
struct Tolerance {
  double tau = kDefaultTau;

  double slack(double a, double b) const {
    return tau * std::max({1.0, std::abs(a), std::abs(b)});
  }
  bool equal(double a, double b) const { return std::abs(a - b) <= slack(a, b); }
  bool less_equal(double a, double b) const { return a <= b + slack(a, b); }
};

}  // namespace maxjsr
