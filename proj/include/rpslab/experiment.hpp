#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rpslab/coeff_samplers.hpp"
#include "rpslab/empirical_lab.hpp"
#include "rpslab/tail_model.hpp"
#include "rpslab/theory_engine.hpp"

namespace rpslab {

enum class Estimator { radius, order_coefficient, growth_order, growth_type };
enum class Statistic { median, fraction_within, fraction_nearest };
enum class TargetSource { analytic, paper_example };

const char* to_string(Estimator e) noexcept;
const char* to_string(Statistic s) noexcept;
const char* to_string(TargetSource s) noexcept;

/// One acceptance target over the replicate estimates. Comparisons are strict,
/// so a zero tolerance never passes.
///
///  median:           |median - centers[0]| < tol
///  fraction_within:  share of estimates within tol of some center >= min_fraction
///  fraction_nearest: share nearer centers[0] than centers[1] is within tol of fraction
struct Target {
  std::string name;
  Statistic statistic = Statistic::median;
  std::vector<double> centers;
  double tolerance = 0.0;
  bool relative = false;
  double min_fraction = 1.0;
  double fraction = 0.5;
  TargetSource source = TargetSource::analytic;
};

/// Condition checked once per experiment alongside the replicates.
struct ConditionSpec {
  TailModel tail;
  std::vector<double> q_grid;
  std::string expected;  // "converges" or "diverges"
};

struct ExperimentConfig {
  std::string name;
  CoefficientModel model = CoefficientModel::isotropic_gaussian(SigmaModel::constant(1.0));
  std::size_t replicates = 1;
  std::uint64_t base_seed = 0;
  std::size_t n_terms = 2000;
  double window_fraction = default_window_fraction;
  Estimator estimator = Estimator::radius;
  std::vector<double> r_grid;
  double rho = 0.0;
  GrowthPolicy growth;
  std::vector<Target> targets;
  std::vector<ConditionSpec> conditions;

  /// Throws Error(validation) on the first violated constraint.
  void validate() const;
  /// Stable text form of every field; hashed into the report.
  std::string canonical_text() const;
};

struct ReplicateResult {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::optional<double> estimate;
  double stability_gap = 0.0;
  double fit_residual = 0.0;
  std::size_t skipped = 0;
  std::string error;  // empty on success
};

struct Summary {
  std::size_t succeeded = 0;
  std::size_t failed = 0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double iqr = 0.0;
  double min = 0.0;
  double max = 0.0;
  // Median of the per-replicate stability gaps.
  double stability_gap = 0.0;
};

struct TargetOutcome {
  Target target;
  double observed = 0.0;
  bool pass = false;
};

struct ConditionOutcome {
  ConditionVerdict verdict;
  std::string expected;
  bool pass = false;
};

struct ExperimentReport {
  std::string name;
  std::string model_id;
  Estimator estimator = Estimator::radius;
  std::uint64_t base_seed = 0;
  std::size_t replicates = 0;
  std::size_t n_terms = 0;
  std::vector<ReplicateResult> results;
  Summary summary;
  std::vector<TargetOutcome> targets;
  std::vector<ConditionOutcome> conditions;
  bool error_budget_exceeded = false;
  std::string config_hash;
  std::string code_version;

  bool passed() const;
};

inline constexpr double replicate_error_budget = 0.01;

/// Type-7 quantile of already sorted data.
double quantile_sorted(const std::vector<double>& sorted, double p);

/// Terms needed by the growth estimators so that every grid radius has a plan.
std::size_t growth_terms_needed(const ExperimentConfig& config);

/// Runs every replicate (seed = base_seed + index) on `workers` threads and
/// aggregates. Results do not depend on the worker count.
ExperimentReport run_experiment(const ExperimentConfig& config, std::size_t workers = 1);

}  // namespace rpslab
