#include "rpslab/theory_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rpslab/errors.hpp"
#include "rpslab/format.hpp"
#include "rpslab/numeric.hpp"

namespace rpslab {

namespace {

// A root sequence shrinking by at least this factor from the inner to the
// outer window is read as limsup 0.
constexpr double decay_ratio_for_zero_limsup = 0.95;

struct Ranges {
  std::uint64_t outer_lo, outer_hi, inner_lo, inner_hi;
};

Ranges ranges_of(const Window& w) {
  if (w.n_min < 2) fail(ErrorKind::argument, "window n_min must be >= 2");
  if (w.n_max < 2 * w.n_min) fail(ErrorKind::argument, "window n_max must be >= 2 n_min");
  Ranges r;
  r.outer_hi = w.n_max;
  r.outer_lo = std::max(w.n_min, w.n_max / 2);
  r.inner_lo = std::max(w.n_min, w.n_max / 4);
  r.inner_hi = r.outer_lo - 1;
  return r;
}

double relative_gap(double outer, double inner) {
  if (outer == inner) return 0.0;
  const double scale = std::max(std::abs(outer), std::abs(inner));
  if (!std::isfinite(scale)) return inf;
  return std::abs(outer - inner) / scale;
}

double checked_log(const std::function<double(std::uint64_t)>& log_rule, std::uint64_t n) {
  const double v = log_rule(n);
  if (std::isnan(v) || v == inf) {
    fail(ErrorKind::model_evaluation, "sequence value is not finite at n=" + std::to_string(n));
  }
  return v;
}

template <class F>
double sup_over(std::uint64_t lo, std::uint64_t hi, F&& value_at) {
  double best = 0.0;
  for (std::uint64_t n = lo; n <= hi; ++n) best = std::max(best, value_at(n));
  return best;
}

Provenance windowed(const Window& w, double spread) {
  Provenance p;
  p.kind = ProvenanceKind::windowed;
  p.window = w;
  p.residual_spread = spread;
  return p;
}

void require_grid(const std::vector<double>& grid, const char* name) {
  if (grid.empty()) fail(ErrorKind::argument, std::string("empty ") + name + " grid");
}

}  // namespace

LimsupEstimate limsup_root(const std::function<double(std::uint64_t)>& log_rule, Window window) {
  const Ranges r = ranges_of(window);
  auto root = [&](std::uint64_t n) {
    const double l = checked_log(log_rule, n);
    return l == -inf ? 0.0 : std::exp(l / static_cast<double>(n));
  };
  LimsupEstimate est;
  est.window = window;
  est.estimate = sup_over(r.outer_lo, r.outer_hi, root);
  est.inner_estimate = sup_over(r.inner_lo, r.inner_hi, root);
  est.relative_gap = relative_gap(est.estimate, est.inner_estimate);
  return est;
}

LimsupEstimate limsup_root(const SigmaModel& sigma, Window window) {
  return limsup_root([&sigma](std::uint64_t n) { return sigma.log_sigma_at(n); }, window);
}

Quantity radius_of(const SigmaModel& sigma, Window window) {
  if (const auto& root = sigma.asymptotics().root_limsup) {
    return {reciprocal(*root), Provenance{}};
  }
  const LimsupEstimate est = limsup_root(sigma, window);
  const bool decaying = est.inner_estimate > 0.0 &&
                        est.estimate <= decay_ratio_for_zero_limsup * est.inner_estimate;
  return {decaying ? inf : reciprocal(est.estimate), windowed(window, est.relative_gap)};
}

Quantity order_of(const SigmaModel& sigma, Window window) {
  const Quantity radius = radius_of(sigma, window);
  if (radius.value != inf) {
    fail(ErrorKind::not_entire, "order needs an entire series but the radius is " +
                                    shortest(radius.value));
  }
  if (const auto& order = sigma.asymptotics().order) return {*order, Provenance{}};

  const Ranges r = ranges_of(window);
  auto log_sigma = [&](std::uint64_t n) {
    return checked_log([&sigma](std::uint64_t k) { return sigma.log_sigma_at(k); }, n);
  };
  std::size_t used = 0;
  auto corrected = [&](std::uint64_t n) {
    const double ln_n = log_sigma(n);
    if (ln_n == -inf) return 0.0;
    if (ln_n == 0.0) {
      fail(ErrorKind::degenerate_order, "sigma_n = 1 at n=" + std::to_string(n));
    }
    const std::uint64_t m = n / 2;
    const double ln_m = log_sigma(m);
    if (ln_m == -inf) return 0.0;
    ++used;
    const double slope = (std::abs(ln_n) / static_cast<double>(n) -
                          std::abs(ln_m) / static_cast<double>(m)) /
                         std::log(static_cast<double>(n) / static_cast<double>(m));
    return slope > 0.0 ? 1.0 / slope : inf;
  };
  auto raw = [&](std::uint64_t n) {
    const double ln_n = log_sigma(n);
    if (ln_n == -inf) return 0.0;
    const double nd = static_cast<double>(n);
    return nd * std::log(nd) / std::abs(ln_n);
  };

  const double outer = sup_over(r.outer_lo, r.outer_hi, corrected);
  if (used == 0) fail(ErrorKind::degenerate_order, "no nonzero terms in the order window");
  const double inner = sup_over(r.inner_lo, r.inner_hi, corrected);
  Quantity q{outer, windowed(window, relative_gap(outer, inner))};
  q.provenance.raw_tail_sup = sup_over(r.outer_lo, r.outer_hi, raw);
  return q;
}

Quantity paper_type_of(const SigmaModel& sigma, double rho, Window window) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    fail(ErrorKind::argument, "rho must be finite and > 0, got " + shortest(rho));
  }
  const auto& as = sigma.asymptotics();
  if (as.paper_type && as.order && std::abs(*as.order - rho) <= 1e-12 * rho) {
    return {*as.paper_type, Provenance{}};
  }
  const Ranges r = ranges_of(window);
  auto term = [&](std::uint64_t n) {
    const double l = checked_log([&sigma](std::uint64_t k) { return sigma.log_sigma_at(k); }, n);
    if (l == -inf) return 0.0;
    const double nd = static_cast<double>(n);
    return std::exp(std::log(nd) / rho + l / nd);
  };
  const double outer = sup_over(r.outer_lo, r.outer_hi, term);
  const double inner = sup_over(r.inner_lo, r.inner_hi, term);
  return {outer, windowed(window, relative_gap(outer, inner))};
}

double levin_type_of(double paper_type, double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) fail(ErrorKind::argument, "rho must be finite and > 0");
  if (!(paper_type >= 0.0) || !std::isfinite(paper_type)) {
    fail(ErrorKind::argument, "paper type must be finite and >= 0");
  }
  if (paper_type == 0.0) return 0.0;
  return std::exp(rho * std::log(paper_type)) / (std::numbers::e * rho);
}

Characteristics characterize(const SigmaModel& sigma, Window window) {
  Characteristics c;
  c.radius = radius_of(sigma, window);
  if (c.radius.value != inf) return c;
  c.order = order_of(sigma, window);
  const double rho = c.order->value;
  if (rho > 0.0 && std::isfinite(rho)) {
    c.paper_type = paper_type_of(sigma, rho, window);
    if (std::isfinite(c.paper_type->value)) {
      c.levin_type = Quantity{levin_type_of(c.paper_type->value, rho), c.paper_type->provenance};
    }
  }
  return c;
}

// ---------------------------------------------------------------------------

bool ConditionVerdict::all_converge() const {
  return !verdicts.empty() && std::all_of(verdicts.begin(), verdicts.end(), [](const auto& v) {
    return std::holds_alternative<Converges>(v.verdict);
  });
}

bool ConditionVerdict::all_diverge() const {
  return !verdicts.empty() && std::all_of(verdicts.begin(), verdicts.end(), [](const auto& v) {
    return std::holds_alternative<Diverges>(v.verdict);
  });
}

ConditionVerdict check_tail_summability(const TailModel& tail, const std::vector<double>& q_grid,
                                        std::uint64_t max_terms) {
  require_grid(q_grid, "Q");
  for (double q : q_grid) {
    if (!(q > 1.0) || !std::isfinite(q)) fail(ErrorKind::argument, "Q must be > 1, got " + shortest(q));
  }
  tail.certify();
  ConditionVerdict out{"tail_summability", "Q", {}};
  for (double q : q_grid) {
    const double log_q = std::log(q);
    out.verdicts.push_back({q, classify_series([&](double k) { return tail.at_log(k * log_q); },
                                               max_terms)});
  }
  return out;
}

ConditionVerdict check_q_condition(const LowerTail& lower_tail, const std::vector<double>& q_grid,
                                   std::uint64_t max_terms) {
  require_grid(q_grid, "q");
  for (double q : q_grid) {
    if (!(q > 0.0 && q < 1.0)) fail(ErrorKind::argument, "q must lie in (0,1), got " + shortest(q));
  }
  ConditionVerdict out{"small_ball", "q", {}};
  for (double q : q_grid) {
    const double log_q = std::log(q);
    out.verdicts.push_back(
        {q, classify_series([&](double k) { return lower_tail(k, k * log_q); }, max_terms)});
  }
  return out;
}

ConditionVerdict check_order_conditions(const PerIndexTail& tail_per_k,
                                        const std::vector<double>& delta_grid,
                                        OrderDirection direction, std::uint64_t max_terms) {
  require_grid(delta_grid, "delta");
  for (double d : delta_grid) {
    if (!(d > 0.0) || !std::isfinite(d)) fail(ErrorKind::argument, "delta must be > 0, got " + shortest(d));
  }
  ConditionVerdict out{direction == OrderDirection::upper ? "order_upper" : "order_lower", "delta", {}};
  for (double d : delta_grid) {
    // Threshold k^(delta k), kept as its logarithm delta k ln k.
    out.verdicts.push_back({d, classify_series(
                                   [&](double k) { return tail_per_k(k, d * k * std::log(k)); },
                                   max_terms)});
  }
  return out;
}

double log_moment(const TailModel& tail, MomentVariant variant) {
  tail.certify();
  const double u0 = tail.support_floor();
  const double e = std::numbers::e;

  double base = 0.0;
  std::function<double(double)> integrand;  // in s = ln u, already times du/ds = u
  if (variant == MomentVariant::log_over_loglog) {
    if (!(u0 > e)) {
      fail(ErrorKind::argument, "ln nu / ln ln nu needs a support floor above e, got " + shortest(u0));
    }
    const double s0 = std::log(u0);
    base = s0 / std::log(s0);
    integrand = [&tail](double s) {
      const double ls = std::log(s);
      return tail.at_log(s) * (ls - 1.0) / (ls * ls);
    };
  } else {
    base = std::log(e + u0);
    if (u0 < 1.0) {
      double error = 0.0;
      base += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
          [&tail, e](double u) { return tail(u) / (e + u); }, u0, 1.0, 12, 1e-12, &error);
    }
    integrand = [&tail](double s) { return tail.at_log(s) / (1.0 + std::exp(1.0 - s)); };
  }

  const double s0 = u0 >= 1.0 ? std::log(u0) : 0.0;
  const BlockScan scan = scan_blocks(integrand, s0, 1.0, base, false);
  switch (scan.outcome) {
    case BlockScan::Outcome::converged:
      return base + scan.total;
    case BlockScan::Outcome::threshold:
    case BlockScan::Outcome::harmonic:
      return inf;
    case BlockScan::Outcome::exhausted:
      break;
  }
  throw InconclusiveError("moment integral neither settled nor diverged by ln u = " +
                              shortest(scan.reached),
                          base + scan.total);
}

}  // namespace rpslab
