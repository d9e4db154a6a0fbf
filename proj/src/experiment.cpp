#include "rpslab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "rpslab/errors.hpp"
#include "rpslab/format.hpp"
#include "rpslab/hashing.hpp"
#include "rpslab/numeric.hpp"
#include "rpslab/series_eval.hpp"

namespace rpslab {

const char* to_string(Estimator e) noexcept {
  switch (e) {
    case Estimator::radius: return "radius";
    case Estimator::order_coefficient: return "order_coefficient";
    case Estimator::growth_order: return "growth_order";
    case Estimator::growth_type: return "growth_type";
  }
  return "?";
}

const char* to_string(Statistic s) noexcept {
  switch (s) {
    case Statistic::median: return "median";
    case Statistic::fraction_within: return "fraction_within";
    case Statistic::fraction_nearest: return "fraction_nearest";
  }
  return "?";
}

const char* to_string(TargetSource s) noexcept {
  return s == TargetSource::analytic ? "analytic" : "paper_example";
}

namespace {

void invalid(const std::string& msg) { fail(ErrorKind::validation, msg); }

bool is_growth(Estimator e) { return e == Estimator::growth_order || e == Estimator::growth_type; }

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + shortest(v[i]);
  return out;
}

bool within(double x, double center, double tol, bool relative) {
  const double bound = relative ? tol * std::abs(center) : tol;
  return std::abs(x - center) < bound;
}

ReplicateResult run_one(const ExperimentConfig& c, const SigmaModel* scale, std::size_t n_terms,
                        std::size_t index) {
  ReplicateResult r;
  r.index = index;
  r.seed = c.base_seed + index;
  try {
    const SampleSeries s = sample(c.model, r.seed, n_terms);
    switch (c.estimator) {
      case Estimator::radius: {
        const auto e = empirical_radius(s, c.window_fraction);
        r.estimate = e.estimate;
        r.stability_gap = e.stability_gap;
        break;
      }
      case Estimator::order_coefficient: {
        const auto e = empirical_order_coefficient(s);
        r.estimate = e.estimate;
        r.stability_gap = e.stability_gap;
        r.skipped = e.skipped_zero + e.skipped_unit;
        break;
      }
      case Estimator::growth_order: {
        const auto f = empirical_order(s, *scale, c.r_grid, c.growth);
        r.estimate = f.estimate;
        r.fit_residual = f.fit_residual;
        break;
      }
      case Estimator::growth_type: {
        const auto f = empirical_type(s, *scale, c.rho, c.r_grid, c.growth);
        r.estimate = f.estimate;
        r.fit_residual = f.fit_residual;
        break;
      }
    }
  } catch (const std::exception& e) {
    r.estimate.reset();
    r.error = e.what();
  }
  return r;
}

TargetOutcome evaluate(const Target& t, const std::vector<double>& sorted) {
  TargetOutcome out{t, 0.0, false};
  if (sorted.empty()) return out;
  const double n = static_cast<double>(sorted.size());
  switch (t.statistic) {
    case Statistic::median:
      out.observed = quantile_sorted(sorted, 0.5);
      out.pass = within(out.observed, t.centers[0], t.tolerance, t.relative);
      break;
    case Statistic::fraction_within: {
      const auto hits = std::count_if(sorted.begin(), sorted.end(), [&](double x) {
        return std::any_of(t.centers.begin(), t.centers.end(),
                           [&](double c) { return within(x, c, t.tolerance, t.relative); });
      });
      out.observed = static_cast<double>(hits) / n;
      out.pass = t.tolerance > 0.0 && out.observed >= t.min_fraction;
      break;
    }
    case Statistic::fraction_nearest: {
      const auto hits = std::count_if(sorted.begin(), sorted.end(), [&](double x) {
        return std::abs(x - t.centers[0]) < std::abs(x - t.centers[1]);
      });
      out.observed = static_cast<double>(hits) / n;
      out.pass = std::abs(out.observed - t.fraction) < t.tolerance;
      break;
    }
  }
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (replicates < 1) invalid("replicates must be >= 1");
  if (!(window_fraction > 0.0 && window_fraction < 1.0)) invalid("window_fraction must lie in (0, 1)");
  if (n_terms < 2) invalid("n_terms must be >= 2");
  if (is_growth(estimator)) {
    if (r_grid.size() < 3) {
      invalid("r_grid needs at least 3 points for a fit, got " + std::to_string(r_grid.size()));
    }
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
      if (!(r_grid[i] > 0.0) || !std::isfinite(r_grid[i])) invalid("r_grid values must be finite and > 0");
      if (i > 0 && !(r_grid[i] > r_grid[i - 1])) invalid("r_grid must be strictly increasing");
    }
    if (!(growth.eps > 0.0)) invalid("eps must be > 0");
    if (!(growth.confidence_multiplier > 0.0)) invalid("multiplier must be > 0");
  }
  if (estimator == Estimator::growth_type && (!(rho > 0.0) || !std::isfinite(rho))) {
    invalid("growth_type needs a finite rho > 0");
  }
  for (const auto& t : targets) {
    if (!(t.tolerance >= 0.0) || !std::isfinite(t.tolerance)) {
      invalid("target '" + t.name + "' tolerance must be finite and >= 0");
    }
    switch (t.statistic) {
      case Statistic::median:
        if (t.centers.size() != 1) invalid("target '" + t.name + "' needs exactly one center");
        break;
      case Statistic::fraction_within:
        if (t.centers.empty()) invalid("target '" + t.name + "' needs at least one center");
        if (!(t.min_fraction > 0.0 && t.min_fraction <= 1.0)) {
          invalid("target '" + t.name + "' min_fraction must lie in (0, 1]");
        }
        break;
      case Statistic::fraction_nearest:
        if (t.centers.size() != 2) invalid("target '" + t.name + "' needs expected and alternative");
        if (!(t.fraction >= 0.0 && t.fraction <= 1.0)) {
          invalid("target '" + t.name + "' fraction must lie in [0, 1]");
        }
        break;
    }
  }
  for (const auto& c : conditions) {
    if (c.expected != "converges" && c.expected != "diverges") {
      invalid("condition expectation must be converges or diverges, got '" + c.expected + "'");
    }
    if (c.q_grid.empty()) invalid("condition needs a non-empty Q grid");
  }
}

std::string ExperimentConfig::canonical_text() const {
  std::ostringstream o;
  o << "name=" << name << "\nmodel=" << model.id() << "\nreplicates=" << replicates
    << "\nbase_seed=" << base_seed << "\nn_terms=" << n_terms
    << "\nwindow_fraction=" << shortest(window_fraction) << "\nestimator=" << to_string(estimator)
    << "\nr_grid=" << join(r_grid) << "\nrho=" << shortest(rho) << "\neps=" << shortest(growth.eps)
    << "\nmultiplier=" << shortest(growth.confidence_multiplier) << "\n";
  for (const auto& t : targets) {
    o << "target=" << t.name << ";" << to_string(t.statistic) << ";" << join(t.centers) << ";"
      << shortest(t.tolerance) << ";" << (t.relative ? "relative" : "absolute") << ";"
      << shortest(t.min_fraction) << ";" << shortest(t.fraction) << ";" << to_string(t.source)
      << "\n";
  }
  for (const auto& c : conditions) {
    o << "condition=" << c.tail.label() << ";" << join(c.q_grid) << ";" << c.expected << "\n";
  }
  return o.str();
}

bool ExperimentReport::passed() const {
  if (error_budget_exceeded) return false;
  return std::all_of(targets.begin(), targets.end(), [](const auto& t) { return t.pass; }) &&
         std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.pass; });
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) fail(ErrorKind::argument, "quantile of empty data");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::size_t growth_terms_needed(const ExperimentConfig& config) {
  std::size_t need = config.n_terms;
  if (!is_growth(config.estimator)) return need;
  const SigmaModel scale = config.model.scale_sequence();
  for (double r : config.r_grid) {
    const CirclePlan plan =
        truncation_bound(scale, r, config.growth.eps, config.growth.confidence_multiplier);
    need = std::max(need, plan.truncation);
  }
  return need;
}

ExperimentReport run_experiment(const ExperimentConfig& config, std::size_t workers) {
  config.validate();
  ExperimentReport rep;
  rep.name = config.name;
  rep.model_id = config.model.id();
  rep.estimator = config.estimator;
  rep.base_seed = config.base_seed;
  rep.replicates = config.replicates;
  rep.config_hash = sha256_hex(config.canonical_text());
  rep.code_version = RPSLAB_VERSION;

  std::optional<SigmaModel> scale;
  if (is_growth(config.estimator)) scale = config.model.scale_sequence();
  rep.n_terms = growth_terms_needed(config);

  rep.results.resize(config.replicates);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < config.replicates; i = next++) {
      rep.results[i] = run_one(config, scale ? &*scale : nullptr, rep.n_terms, i);
    }
  };
  workers = std::clamp<std::size_t>(workers, 1, config.replicates);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  std::vector<double> values, gaps;
  for (const auto& r : rep.results) {
    if (!r.estimate) continue;
    values.push_back(*r.estimate);
    gaps.push_back(r.stability_gap);
  }
  std::sort(values.begin(), values.end());
  std::sort(gaps.begin(), gaps.end());
  rep.summary.succeeded = values.size();
  rep.summary.failed = config.replicates - values.size();
  if (!values.empty()) {
    rep.summary.median = quantile_sorted(values, 0.5);
    rep.summary.q1 = quantile_sorted(values, 0.25);
    rep.summary.q3 = quantile_sorted(values, 0.75);
    rep.summary.iqr = rep.summary.q3 - rep.summary.q1;
    rep.summary.min = values.front();
    rep.summary.max = values.back();
    rep.summary.stability_gap = quantile_sorted(gaps, 0.5);
  }
  rep.error_budget_exceeded = static_cast<double>(rep.summary.failed) >
                              replicate_error_budget * static_cast<double>(config.replicates);

  for (const auto& t : config.targets) rep.targets.push_back(evaluate(t, values));
  for (const auto& c : config.conditions) {
    ConditionOutcome o{check_tail_summability(c.tail, c.q_grid), c.expected, false};
    o.pass = c.expected == "converges" ? o.verdict.all_converge() : o.verdict.all_diverge();
    rep.conditions.push_back(std::move(o));
  }
  return rep;
}

}  // namespace rpslab
