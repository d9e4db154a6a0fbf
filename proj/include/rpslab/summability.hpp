#pragma once

#include <cstdint>
#include <functional>
#include <variant>

namespace rpslab {

inline constexpr double divergence_threshold = 1e6;

struct Converges {
  double partial_sum = 0.0;
  /// Integral-test bound on the neglected sum past the last explicit term.
  double remainder_bound = 0.0;
};

struct DivergenceWitness {
  enum class Kind { threshold, harmonic };
  Kind kind = Kind::threshold;
  /// Certified lower bound on the full sum over the indices examined.
  double lower_bound = 0.0;
  /// For harmonic witnesses: min of i * S_i over the last decade of dyadic
  /// block indices, where S_i is the integral over block i.
  double harmonic_constant = 0.0;
  /// Largest (continuous) index examined.
  double reached_index = 0.0;
};

struct Diverges {
  DivergenceWitness witness;
};

struct Inconclusive {
  double partial_sum = 0.0;
  std::uint64_t terms_used = 0;
};

using SeriesVerdict = std::variant<Converges, Diverges, Inconclusive>;

const char* verdict_name(const SeriesVerdict& verdict) noexcept;

/// Classifies sum_{k>=1} a(k) for a nonincreasing term function with values
/// in [0,1], continued to real arguments.
///
/// Terms 1..max_terms are summed explicitly. Past that, the integral of a
/// over dyadic blocks [K 2^i, K 2^(i+1)] (Gauss-Kronrod, up to x ~ 1e300) is
/// used as an integral-test remainder, and also as a rigorous lower bound
/// for divergence. Verdicts:
///   converges    blocks decay geometrically to negligible, remainder < 1
///   diverges     lower bound > 1e6, or i * S_i fails to decay between the
///                last two decades of block indices (harmonic comparison on
///                the condensed series)
///   inconclusive otherwise
/// A rising term or a value outside [0,1] throws.
SeriesVerdict classify_series(const std::function<double(double)>& term, std::uint64_t max_terms);

/// Result of integrating over geometrically widening blocks.
struct BlockScan {
  enum class Outcome { converged, threshold, harmonic, exhausted };
  Outcome outcome = Outcome::exhausted;
  /// Integral over all scanned blocks; for `converged` it includes the
  /// geometric cap on what was not scanned.
  double total = 0.0;
  double reached = 0.0;
  double harmonic_constant = 0.0;
};

/// Integrates f over [start, start + w), [start + w, start + 3w), ... with
/// block widths w 2^i, until the blocks decay geometrically below 1e-16 of
/// the running total (`base` + scanned integral), the running total exceeds
/// the divergence threshold, or the right end passes `limit`. When
/// `monotone` is set, f must be nonnegative and nonincreasing and each block
/// estimate is clamped to its trivial bounds.
BlockScan scan_blocks(const std::function<double(double)>& f, double start, double first_width,
                      double base, bool monotone, double limit = 1e300);

}  // namespace rpslab
