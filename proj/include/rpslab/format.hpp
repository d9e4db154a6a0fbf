#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <string>

namespace rpslab {

/// Shortest round-trip decimal form; infinities print as "inf" / "-inf".
inline std::string shortest(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  (void)ec;
  return std::string(buf.data(), end);
}

}  // namespace rpslab
