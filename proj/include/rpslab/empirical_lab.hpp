#pragma once

#include <cstddef>
#include <vector>

#include "rpslab/coeff_samplers.hpp"
#include "rpslab/sigma_model.hpp"

namespace rpslab {

/// Element i is |xi_n|^(1/n) for n = i + 1; zero coefficients give 0.
std::vector<double> empirical_root_sequence(const SampleSeries& series);

struct WindowedEstimate {
  double estimate = 0.0;
  /// Relative difference to the same statistic on the preceding window.
  double stability_gap = 0.0;
  std::size_t window_lo = 0;  // inclusive
  std::size_t window_hi = 0;  // inclusive
};

inline constexpr double default_window_fraction = 0.25;

/// 1 / sup of the root sequence over the last `window_fraction` of indices.
WindowedEstimate empirical_radius(const SampleSeries& series,
                                  double window_fraction = default_window_fraction);

struct CoefficientOrderEstimate : WindowedEstimate {
  std::size_t skipped_zero = 0;
  std::size_t skipped_unit = 0;
  /// Uncorrected sup of n ln n / |ln |xi_n|| over the same window.
  double raw_tail_sup = 0.0;
};

/// Order from coefficient magnitudes: windowed sup of the two-scale estimate
/// n ln(n/m) / (|ln|xi_n|| - (n/m)|ln|xi_m||), m = n/2, over the final quarter.
CoefficientOrderEstimate empirical_order_coefficient(const SampleSeries& series);

struct GrowthPoint {
  double r = 0.0;
  double max_modulus = 0.0;
  std::size_t truncation = 0;
  std::size_t angular_points = 0;
};

struct GrowthPolicy {
  double eps = 1e-9;
  double confidence_multiplier = 6.0;
};

/// Max modulus on every grid radius, planned from `sigma`.
std::vector<GrowthPoint> growth_table(const SampleSeries& series, const SigmaModel& sigma,
                                      const std::vector<double>& r_grid,
                                      const GrowthPolicy& policy = {});

struct GrowthFit {
  double estimate = 0.0;       // order or type, depending on the fit
  double fit_residual = 0.0;   // Euclidean norm of the ln M residuals
  double coefficient = 0.0;    // beta in ln M = beta r^rho + c
  double intercept = 0.0;      // c
  double loglog_slope = 0.0;   // plain regression slope of ln ln M on ln r
  std::vector<GrowthPoint> points;
};

/// Order from growth: ln M(r) = beta r^rho + c fitted by least squares with
/// rho profiled out; the plain ln ln M vs ln r slope is kept as a diagnostic.
GrowthFit empirical_order(const SampleSeries& series, const SigmaModel& sigma,
                          const std::vector<double>& r_grid, const GrowthPolicy& policy = {});

/// Type from growth: least squares ln M(r) = beta r^rho + c at fixed rho.
GrowthFit empirical_type(const SampleSeries& series, const SigmaModel& sigma, double rho,
                         const std::vector<double>& r_grid, const GrowthPolicy& policy = {});

}  // namespace rpslab
