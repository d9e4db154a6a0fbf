#include "rpslab/series_eval.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "rpslab/errors.hpp"
#include "rpslab/format.hpp"
#include "rpslab/numeric.hpp"

namespace rpslab {

namespace {

constexpr std::size_t max_plan_terms = 1'000'000;

bool is_power_of_two(std::size_t m) { return m != 0 && (m & (m - 1)) == 0; }

}  // namespace

Evaluation eval_truncated(const SampleSeries& series, std::complex<double> z, std::size_t n_terms) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    fail(ErrorKind::argument, "evaluation point must be finite");
  }
  if (n_terms > series.n_terms()) {
    fail(ErrorKind::insufficient_terms, "requested " + std::to_string(n_terms) +
                                            " terms but the series has " +
                                            std::to_string(series.n_terms()));
  }
  const double modulus = std::abs(z);
  std::complex<double> acc{0.0, 0.0};
  double magnitude = 0.0;
  for (std::size_t i = n_terms; i-- > 0;) {
    const auto& c = series.coefficients[i];
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      fail(ErrorKind::argument, "non-finite coefficient at k=" + std::to_string(i));
    }
    acc = acc * z + c;
    magnitude = magnitude * modulus + std::abs(c);
  }
  const double eps = std::numeric_limits<double>::epsilon();
  return {acc, 2.0 * static_cast<double>(n_terms) * eps * magnitude};
}

Evaluation eval_truncated(const SampleSeries& series, std::complex<double> z) {
  return eval_truncated(series, z, series.n_terms());
}

double max_modulus(const SampleSeries& series, const CirclePlan& plan) {
  if (plan.truncation > series.n_terms()) {
    fail(ErrorKind::insufficient_terms, "plan needs " + std::to_string(plan.truncation) +
                                            " terms but the series has " +
                                            std::to_string(series.n_terms()));
  }
  if (!(plan.radius > 0.0) || !std::isfinite(plan.radius)) {
    fail(ErrorKind::argument, "circle radius must be finite and > 0");
  }
  if (!is_power_of_two(plan.angular_points)) {
    fail(ErrorKind::argument, "angular points must be a power of two");
  }
  const double m = static_cast<double>(plan.angular_points);
  double best = 0.0;
  for (std::size_t j = 0; j < plan.angular_points; ++j) {
    // j/M is exact under doubling of M, so nested grids share their points.
    const double theta = 2.0 * std::numbers::pi * (static_cast<double>(j) / m);
    const auto z = std::polar(plan.radius, theta);
    best = std::max(best, std::abs(eval_truncated(series, z, plan.truncation).value));
  }
  return best;
}

AdaptiveMaximum max_modulus_adaptive(const SampleSeries& series, CirclePlan plan,
                                     double relative_change, std::size_t cap) {
  double current = max_modulus(series, plan);
  while (plan.angular_points < cap) {
    plan.angular_points *= 2;
    const double refined = max_modulus(series, plan);
    const double change = current > 0.0 ? (refined - current) / current : 0.0;
    current = refined;
    if (change < relative_change) break;
  }
  return {current, plan.angular_points};
}

CirclePlan truncation_bound(const SigmaModel& sigma, double r, double eps,
                            double confidence_multiplier) {
  if (!(r > 0.0) || !std::isfinite(r)) fail(ErrorKind::argument, "r must be finite and > 0");
  if (!(eps > 0.0)) fail(ErrorKind::argument, "eps must be > 0");
  if (!(confidence_multiplier > 0.0)) fail(ErrorKind::argument, "confidence multiplier must be > 0");
  if (const auto& root = sigma.asymptotics().root_limsup; root && *root * r >= 1.0) {
    fail(ErrorKind::no_plan, "r=" + shortest(r) + " is not inside the radius of convergence " +
                                 shortest(1.0 / *root));
  }

  const double log_r = std::log(r);
  const double log_budget = std::log(eps) - std::log(confidence_multiplier);
  auto log_term = [&](std::size_t n) {
    const double ls = sigma.log_sigma_at(n);
    return ls == -inf ? -inf : ls + static_cast<double>(n) * log_r;
  };

  std::vector<double> terms;
  terms.push_back(log_term(0));
  double log_cap = inf;
  for (std::size_t n = 0;; ++n) {
    if (n >= max_plan_terms) {
      fail(ErrorKind::no_plan, "term ratio never fell to 1/2 within " +
                                   std::to_string(max_plan_terms) + " terms at r=" + shortest(r));
    }
    terms.push_back(log_term(n + 1));
    const double cur = terms[n];
    const double next = terms[n + 1];
    double ratio;
    if (cur == -inf) {
      ratio = next == -inf ? 0.0 : inf;
    } else {
      ratio = std::exp(next - cur);
    }
    if (ratio <= 0.5 + 1e-12) {
      // sum_{m>=n} t_m <= t_n / (1 - ratio) while the ratio keeps shrinking.
      log_cap = cur == -inf ? -inf : cur - std::log1p(-std::min(ratio, 0.5 + 1e-12));
      if (log_cap <= log_budget) {
        terms.resize(n + 1);
        break;
      }
    }
  }

  // Walk back from the cap: tail(N) = sum_{n=N}^{L-1} t_n + cap.
  std::size_t best = terms.size() - 1;
  double log_tail = log_cap;
  double best_tail = log_tail;
  for (std::size_t n = terms.size() - 1; n-- > 0;) {
    const double candidate = log_add_exp(log_tail, terms[n]);
    if (candidate > log_budget) break;
    log_tail = candidate;
    best = n;
    best_tail = log_tail;
  }
  CirclePlan plan;
  plan.radius = r;
  plan.truncation = std::max<std::size_t>(best, 1);
  plan.tail_bound = confidence_multiplier * std::exp(best_tail);
  return plan;
}

}  // namespace rpslab
