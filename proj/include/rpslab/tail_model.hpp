#pragma once

#include <functional>
#include <optional>
#include <string>

namespace rpslab {

/// A tail function u -> T(u) = P(|eta| > u), nonincreasing, with T = 1 below
/// the support floor u0.
///
/// The rule is expressed in terms of ln u so thresholds like Q^k or k^(dk)
/// can be evaluated far past the range of a double. An optional closed-form
/// inverse (also log-valued) maps a level U in (0,1) to ln inf{u : T(u) <= U}.
class TailModel {
 public:
  using LogRule = std::function<double(double log_u)>;
  using LogInverse = std::function<double(double level)>;

  TailModel(LogRule rule, double support_floor, bool monotone_certified, std::string label,
            std::optional<LogInverse> log_inverse = std::nullopt);

  /// T(u) = min(1, u^-b), floor 1.
  static TailModel power(double b);
  /// T(u) = min(1, 2 exp(-u^2/2)), floor 0.
  static TailModel subgaussian();
  /// T(y) = 1/sqrt(ln y), floor e (the common factor of the second counterexample).
  static TailModel log_sqrt();
  /// T(u) = min(1, 1/ln u), floor e.
  static TailModel inverse_log();
  /// Degenerate nu == value: T(u) = 1 for u < value, 0 afterwards.
  static TailModel point_mass(double value);
  /// Wraps a linear-domain rule; monotonicity is spot-checked, not assumed.
  static TailModel from_linear(std::function<double(double)> rule, double support_floor,
                               std::string label);

  double operator()(double u) const;
  double at_log(double log_u) const;

  double support_floor() const noexcept { return floor_; }
  bool monotone_certified() const noexcept { return certified_; }
  const std::string& label() const noexcept { return label_; }
  const std::optional<LogInverse>& log_inverse() const noexcept { return log_inverse_; }

  /// Spot-checks range and monotonicity on a logarithmic grid reaching
  /// u ~ exp(1e300). No-op for certified models. Throws a tail-model error.
  void certify() const;

 private:
  LogRule rule_;
  double floor_;
  double log_floor_;
  bool certified_;
  std::string label_;
  std::optional<LogInverse> log_inverse_;
};

/// inf{u : T(u) <= level}, for level in (0,1).
double inverse_tail_sample(const TailModel& tail, double level);
/// ln of the same quantile; stays finite when the quantile itself overflows.
double inverse_tail_sample_log(const TailModel& tail, double level);

}  // namespace rpslab
