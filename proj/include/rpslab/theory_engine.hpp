#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rpslab/sigma_model.hpp"
#include "rpslab/summability.hpp"
#include "rpslab/tail_model.hpp"

namespace rpslab {

/// Index window for limsup surrogates: the estimate is the sup over
/// [n_max/2, n_max], and the sup over [n_max/4, n_max/2) is the stability
/// diagnostic. Neither window goes below n_min.
struct Window {
  std::uint64_t n_min = 2;
  std::uint64_t n_max = 4096;
};

struct LimsupEstimate {
  double estimate = 0.0;        // outer-window sup
  double inner_estimate = 0.0;  // inner-window sup
  double relative_gap = 0.0;    // |outer - inner| / max(outer, inner)
  Window window;
};

enum class ProvenanceKind { analytic, windowed };

struct Provenance {
  ProvenanceKind kind = ProvenanceKind::analytic;
  Window window;
  double residual_spread = 0.0;
  /// Windowed order only: the uncorrected outer-window sup of n ln n / |ln sigma_n|.
  std::optional<double> raw_tail_sup;

  /// Agreement tolerance reported with a windowed estimate: twice the
  /// relative inner/outer gap (the remaining drift if successive doublings
  /// keep shrinking it at least geometrically).
  double tolerance() const noexcept { return kind == ProvenanceKind::analytic ? 0.0 : 2.0 * residual_spread; }
};

struct Quantity {
  double value = 0.0;
  Provenance provenance;
};

struct Characteristics {
  Quantity radius;
  std::optional<Quantity> order;       // only when radius = inf
  std::optional<Quantity> paper_type;  // limsup n^(1/rho) sigma_n^(1/n)
  std::optional<Quantity> levin_type;  // paper_type^rho / (e rho)
};

/// sup of seq(n)^(1/n) over the window, with `log_rule` returning ln seq(n).
/// -inf (a zero term) contributes 0; +inf or NaN is an evaluation error.
LimsupEstimate limsup_root(const std::function<double(std::uint64_t)>& log_rule, Window window);
LimsupEstimate limsup_root(const SigmaModel& sigma, Window window = {});

Quantity radius_of(const SigmaModel& sigma, Window window = {});

/// Windowed path: outer-window sup of the two-scale estimate
///   1/rho_n = (|ln sigma_n|/n - |ln sigma_m|/m) / ln(n/m),  m = n/2,
/// which removes the linear-in-n part of |ln sigma_n| that makes the plain
/// ratio n ln n / |ln sigma_n| converge only like 1/ln n.
Quantity order_of(const SigmaModel& sigma, Window window = {});

Quantity paper_type_of(const SigmaModel& sigma, double rho, Window window = {});

double levin_type_of(double paper_type, double rho);

Characteristics characterize(const SigmaModel& sigma, Window window = {});

// ---------------------------------------------------------------------------
// Summability and moment conditions.

struct ParameterVerdict {
  double parameter = 0.0;
  SeriesVerdict verdict;
};

struct ConditionVerdict {
  std::string condition_id;
  std::string parameter_name;  // "Q", "q" or "delta"
  std::vector<ParameterVerdict> verdicts;

  bool all_converge() const;
  bool all_diverge() const;
};

inline constexpr std::uint64_t default_max_terms = 10'000;

/// sum_k T(Q^k) for each Q > 1.
ConditionVerdict check_tail_summability(const TailModel& tail, const std::vector<double>& q_grid,
                                        std::uint64_t max_terms = default_max_terms);

/// Rule (k, ln x) -> P(|eta_k| / sigma_k < x).
using LowerTail = std::function<double(double k, double log_x)>;

/// sum_k P(|eta_k|/sigma_k < q^k) for each q in (0,1).
ConditionVerdict check_q_condition(const LowerTail& lower_tail, const std::vector<double>& q_grid,
                                   std::uint64_t max_terms = default_max_terms);

/// Rule (k, ln u) -> T_k(u), the per-index tail at threshold u.
using PerIndexTail = std::function<double(double k, double log_u)>;

enum class OrderDirection { upper, lower };

/// sum_k T_k(k^(delta k)) for each delta > 0. For the lower direction the
/// rule is P(sigma_k / |eta_k| > u).
ConditionVerdict check_order_conditions(const PerIndexTail& tail_per_k,
                                        const std::vector<double>& delta_grid,
                                        OrderDirection direction,
                                        std::uint64_t max_terms = default_max_terms);

enum class MomentVariant {
  log_e_plus_nu,   // E ln(e + nu)
  log_e_plus_tau,  // E ln(e + tau), same integrand for the small-ball companion
  log_over_loglog  // E ln nu / ln ln nu, needs support floor > e
};

/// E g(nu) = g(u0) + int_{u0}^inf g'(u) T(u) du, integrated in s = ln u over
/// doubling blocks. Returns +inf when the integral is certified divergent;
/// throws InconclusiveError when neither outcome can be certified.
double log_moment(const TailModel& tail, MomentVariant variant);

}  // namespace rpslab
