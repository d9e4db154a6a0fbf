#pragma once

#include <cmath>
#include <limits>

namespace rpslab {

inline constexpr double inf = std::numeric_limits<double>::infinity();

/// ln(e^a + e^b) without overflow; either argument may be -inf.
inline double log_add_exp(double a, double b) noexcept {
  if (a == -inf) return b;
  if (b == -inf) return a;
  const double hi = a > b ? a : b;
  const double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

/// Extended-real reciprocal: 1/0 = inf, 1/inf = 0.
inline double reciprocal(double x) noexcept { return 1.0 / x; }

}  // namespace rpslab
