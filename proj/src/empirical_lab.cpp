#include "rpslab/empirical_lab.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "rpslab/errors.hpp"
#include "rpslab/format.hpp"
#include "rpslab/numeric.hpp"
#include "rpslab/series_eval.hpp"
#include "rpslab/theory_engine.hpp"

namespace rpslab {

namespace {

constexpr std::size_t min_radius_terms = 64;
constexpr std::size_t min_order_terms = 256;
constexpr double min_growth_modulus = 3.0;
constexpr double rho_search_lo = 0.05;
constexpr double rho_search_hi = 50.0;
constexpr int rho_coarse_points = 400;

double gap_of(double a, double b) {
  if (a == b) return 0.0;
  const double scale = std::max(std::abs(a), std::abs(b));
  if (!std::isfinite(scale)) return inf;
  return std::abs(a - b) / scale;
}

double root_at(const SampleSeries& s, std::size_t n) {
  const double l = s.log_abs[n];
  return l == -inf ? 0.0 : std::exp(l / static_cast<double>(n));
}

bool all_zero(const SampleSeries& s) {
  return std::all_of(s.log_abs.begin(), s.log_abs.end(), [](double l) { return l == -inf; });
}

void check_grid(const std::vector<double>& r_grid) {
  if (r_grid.size() < 3) {
    fail(ErrorKind::argument, "growth fit needs at least 3 grid points, got " +
                                  std::to_string(r_grid.size()));
  }
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    if (!(r_grid[i] > 0.0) || !std::isfinite(r_grid[i])) {
      fail(ErrorKind::argument, "grid radius must be finite and > 0, got " + shortest(r_grid[i]));
    }
    if (i > 0 && !(r_grid[i] > r_grid[i - 1])) {
      fail(ErrorKind::argument, "r grid must be strictly increasing");
    }
  }
}

struct Line {
  double slope = 0.0;
  double intercept = 0.0;
  double sse = 0.0;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  Line l;
  l.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  l.intercept = my - l.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (l.slope * x[i] + l.intercept);
    l.sse += e * e;
  }
  return l;
}

Line power_fit(const std::vector<GrowthPoint>& pts, double rho) {
  std::vector<double> x, y;
  for (const auto& p : pts) {
    x.push_back(std::pow(p.r, rho));
    y.push_back(std::log(p.max_modulus));
  }
  return least_squares(x, y);
}

double loglog_slope(const std::vector<GrowthPoint>& pts) {
  std::vector<double> x, y;
  for (const auto& p : pts) {
    x.push_back(std::log(p.r));
    y.push_back(std::log(std::log(p.max_modulus)));
  }
  return least_squares(x, y).slope;
}

}  // namespace

std::vector<double> empirical_root_sequence(const SampleSeries& series) {
  std::vector<double> out;
  if (series.n_terms() < 2) return out;
  out.reserve(series.n_terms() - 1);
  for (std::size_t n = 1; n < series.n_terms(); ++n) out.push_back(root_at(series, n));
  return out;
}

WindowedEstimate empirical_radius(const SampleSeries& series, double window_fraction) {
  if (!(window_fraction > 0.0 && window_fraction < 1.0)) {
    fail(ErrorKind::argument, "window fraction must lie in (0, 1), got " + shortest(window_fraction));
  }
  const std::size_t n = series.n_terms();
  if (n < min_radius_terms) {
    fail(ErrorKind::insufficient_terms, "empirical radius needs at least " +
                                            std::to_string(min_radius_terms) + " terms, got " +
                                            std::to_string(n));
  }
  const auto width = std::max<std::size_t>(
      1, static_cast<std::size_t>(window_fraction * static_cast<double>(n)));
  WindowedEstimate est;
  est.window_hi = n - 1;
  est.window_lo = std::max<std::size_t>(1, n - width);

  double outer = 0.0;
  for (std::size_t k = est.window_lo; k <= est.window_hi; ++k) outer = std::max(outer, root_at(series, k));
  if (outer == 0.0) {
    fail(ErrorKind::degenerate_series, "all coefficients in the window [" +
                                           std::to_string(est.window_lo) + ", " +
                                           std::to_string(est.window_hi) + "] are zero");
  }
  double inner = 0.0;
  const std::size_t inner_lo = est.window_lo > width ? est.window_lo - width : 1;
  for (std::size_t k = inner_lo; k < est.window_lo; ++k) inner = std::max(inner, root_at(series, k));

  est.estimate = reciprocal(outer);
  est.stability_gap = gap_of(est.estimate, reciprocal(inner));
  return est;
}

CoefficientOrderEstimate empirical_order_coefficient(const SampleSeries& series) {
  const std::size_t n_terms = series.n_terms();
  if (n_terms < min_order_terms) {
    fail(ErrorKind::insufficient_terms, "coefficient order needs at least " +
                                            std::to_string(min_order_terms) + " terms, got " +
                                            std::to_string(n_terms));
  }
  const std::size_t width = n_terms / 4;
  CoefficientOrderEstimate est;
  est.window_hi = n_terms - 1;
  est.window_lo = n_terms - width;

  auto scan = [&](std::size_t lo, std::size_t hi, bool count, double* raw) {
    double best = 0.0;
    for (std::size_t n = lo; n <= hi; ++n) {
      const std::size_t m = n / 2;
      const double ln_n = series.log_abs[n];
      const double ln_m = series.log_abs[m];
      if (ln_n == -inf || ln_m == -inf) {
        if (count) ++est.skipped_zero;
        continue;
      }
      if (ln_n == 0.0 || ln_m == 0.0) {
        if (count) ++est.skipped_unit;
        continue;
      }
      const double nd = static_cast<double>(n);
      const double md = static_cast<double>(m);
      if (raw) *raw = std::max(*raw, nd * std::log(nd) / std::abs(ln_n));
      const double slope = (std::abs(ln_n) / nd - std::abs(ln_m) / md) / std::log(nd / md);
      best = std::max(best, slope > 0.0 ? 1.0 / slope : inf);
    }
    return best;
  };

  est.estimate = scan(est.window_lo, est.window_hi, true, &est.raw_tail_sup);
  const std::size_t skipped = est.skipped_zero + est.skipped_unit;
  if (2 * skipped > width) {
    fail(ErrorKind::unreliable_estimate, std::to_string(skipped) + " of " + std::to_string(width) +
                                             " window indices skipped (zero or unit modulus)");
  }
  const double inner = scan(est.window_lo - width, est.window_lo - 1, false, nullptr);
  est.stability_gap = gap_of(est.estimate, inner);
  return est;
}

std::vector<GrowthPoint> growth_table(const SampleSeries& series, const SigmaModel& sigma,
                                      const std::vector<double>& r_grid,
                                      const GrowthPolicy& policy) {
  check_grid(r_grid);
  if (all_zero(series)) fail(ErrorKind::degenerate_series, "every coefficient is zero");
  const Quantity radius = radius_of(sigma);
  if (radius.value != inf) {
    fail(ErrorKind::not_entire, "growth fits need an entire series but the radius is " +
                                    shortest(radius.value));
  }
  std::vector<GrowthPoint> pts;
  pts.reserve(r_grid.size());
  for (double r : r_grid) {
    const CirclePlan plan = truncation_bound(sigma, r, policy.eps, policy.confidence_multiplier);
    const AdaptiveMaximum m = max_modulus_adaptive(series, plan);
    if (!(m.value >= min_growth_modulus)) {
      fail(ErrorKind::grid_too_small, "M(r) = " + shortest(m.value) + " < 3 at r=" + shortest(r));
    }
    pts.push_back({r, m.value, plan.truncation, m.angular_points});
  }
  return pts;
}

GrowthFit empirical_order(const SampleSeries& series, const SigmaModel& sigma,
                          const std::vector<double>& r_grid, const GrowthPolicy& policy) {
  GrowthFit fit;
  fit.points = growth_table(series, sigma, r_grid, policy);
  fit.loglog_slope = loglog_slope(fit.points);

  // Profile the exponent: coarse scan in ln rho, then Brent around the best cell.
  auto sse_at = [&](double log_rho) { return power_fit(fit.points, std::exp(log_rho)).sse; };
  const double a = std::log(rho_search_lo);
  const double b = std::log(rho_search_hi);
  const double step = (b - a) / rho_coarse_points;
  int best_i = 0;
  double best = inf;
  for (int i = 0; i <= rho_coarse_points; ++i) {
    const double v = sse_at(a + step * i);
    if (v < best) {
      best = v;
      best_i = i;
    }
  }
  const double lo = a + step * std::max(0, best_i - 1);
  const double hi = a + step * std::min(rho_coarse_points, best_i + 1);
  const auto [log_rho, sse] = boost::math::tools::brent_find_minima(sse_at, lo, hi, 52);
  const double rho = sse <= best ? std::exp(log_rho) : std::exp(a + step * best_i);

  const Line line = power_fit(fit.points, rho);
  fit.estimate = rho;
  fit.coefficient = line.slope;
  fit.intercept = line.intercept;
  fit.fit_residual = std::sqrt(line.sse);
  return fit;
}

GrowthFit empirical_type(const SampleSeries& series, const SigmaModel& sigma, double rho,
                         const std::vector<double>& r_grid, const GrowthPolicy& policy) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    fail(ErrorKind::argument, "rho must be finite and > 0, got " + shortest(rho));
  }
  GrowthFit fit;
  fit.points = growth_table(series, sigma, r_grid, policy);
  fit.loglog_slope = loglog_slope(fit.points);
  const Line line = power_fit(fit.points, rho);
  fit.estimate = line.slope;
  fit.coefficient = line.slope;
  fit.intercept = line.intercept;
  fit.fit_residual = std::sqrt(line.sse);
  return fit;
}

}  // namespace rpslab
