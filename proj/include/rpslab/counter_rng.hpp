#pragma once

#include <cstdint>

namespace rpslab {

/// Stateless counter-based uniform stream: every draw is a pure function of
/// (seed, index, stream), so draws for index k never depend on how many
/// other indices were generated first, or by which thread.
namespace counter_rng {

inline constexpr std::uint64_t global_index = ~std::uint64_t{0};

enum class Stream : std::uint32_t {
  real_part = 1,
  imag_part = 2,
  magnitude = 3,
  phase = 4,
  branch = 5,
  common_factor = 6,
};

inline std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t bits(std::uint64_t seed, std::uint64_t index, Stream stream) noexcept {
  std::uint64_t h = mix64(seed ^ 0x5851f42d4c957f2dULL);
  h = mix64(h ^ (index * 0xd1b54a32d192ed03ULL));
  h = mix64(h ^ (static_cast<std::uint64_t>(stream) * 0xa0761d6478bd642fULL));
  return h;
}

/// Uniform in the open interval (0,1): 53 random bits, centred in their cell.
inline double uniform(std::uint64_t seed, std::uint64_t index, Stream stream) noexcept {
  return (static_cast<double>(bits(seed, index, stream) >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace counter_rng
}  // namespace rpslab
