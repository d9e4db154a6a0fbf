#pragma once

#include <complex>
#include <cstddef>

#include "rpslab/coeff_samplers.hpp"
#include "rpslab/sigma_model.hpp"

namespace rpslab {

struct Evaluation {
  std::complex<double> value;
  /// Forward rounding bound 2 N eps sum |xi_k| |z|^k for the Horner value.
  double rounding_bound = 0.0;
};

/// Horner evaluation of sum_{k<n_terms} xi_k z^k.
Evaluation eval_truncated(const SampleSeries& series, std::complex<double> z, std::size_t n_terms);
Evaluation eval_truncated(const SampleSeries& series, std::complex<double> z);

inline constexpr std::size_t default_angular_points = 1024;
inline constexpr std::size_t max_angular_points = std::size_t{1} << 16;

struct CirclePlan {
  double radius = 1.0;
  std::size_t angular_points = default_angular_points;  // power of two
  std::size_t truncation = 1;
  /// confidence_multiplier * sum_{n >= truncation} sigma_n r^n.
  double tail_bound = 0.0;
};

/// Max of |f_N(r e^{i theta})| over theta_j = 2 pi j / M. Grids are nested
/// for powers of two, so doubling M never lowers the result.
double max_modulus(const SampleSeries& series, const CirclePlan& plan);

struct AdaptiveMaximum {
  double value = 0.0;
  std::size_t angular_points = 0;
};

/// Doubles M from plan.angular_points until the maximum moves by less than
/// `relative_change` or M reaches `cap`.
AdaptiveMaximum max_modulus_adaptive(const SampleSeries& series, CirclePlan plan,
                                     double relative_change = 1e-3,
                                     std::size_t cap = max_angular_points);

/// Smallest N with multiplier * sum_{n>=N} sigma_n r^n <= eps.
///
/// Terms are summed exactly until the ratio sigma_{n+1} r / sigma_n drops to
/// 1/2 or below; past that point the remainder is capped geometrically,
/// assuming the ratio stays nonincreasing (true for every built-in family).
CirclePlan truncation_bound(const SigmaModel& sigma, double r, double eps,
                            double confidence_multiplier = 6.0);

}  // namespace rpslab
