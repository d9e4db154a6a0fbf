#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace rpslab {

/// Closed-form asymptotics of a scale sequence. Absent fields are unknown.
struct Asymptotics {
  std::optional<double> root_limsup;  // limsup sigma_n^(1/n)
  std::optional<double> order;        // limsup n ln n / |ln sigma_n|
  std::optional<double> paper_type;   // limsup n^(1/order) sigma_n^(1/n)
};

class SigmaModel;

namespace family {

struct Constant { double c; };
struct Geometric { double a; };            // sigma_n = a^-n
struct FactorialPower { double alpha; };   // sigma_n = (n!)^-alpha
struct SuperGeometric { double theta; };   // sigma_n = n^(-theta n)

enum class Extension { repeat_last, geometric_extrapolate, error_beyond_end };

struct ExplicitList {
  std::vector<double> values;
  Extension extension = Extension::error_beyond_end;
};

/// Linear-domain rule n -> sigma_n supplied by the caller.
struct CustomRule {
  std::function<double(std::uint64_t)> rule;
};

/// sqrt(first_n^2 + second_n^2); the per-index standard deviation of a
/// complex Gaussian with independent real and imaginary parts.
struct RootSumSquares {
  std::shared_ptr<const SigmaModel> first;
  std::shared_ptr<const SigmaModel> second;
};

}  // namespace family

/// A deterministic coefficient-scale sequence n -> sigma_n >= 0.
///
/// Everything is evaluated in log domain; the linear value is derived by
/// exponentiation and saturates to 0 or +inf instead of failing. Models are
/// immutable and safe to share across threads.
class SigmaModel {
 public:
  using Family = std::variant<family::Constant, family::Geometric, family::FactorialPower,
                              family::SuperGeometric, family::ExplicitList, family::CustomRule,
                              family::RootSumSquares>;

  static SigmaModel constant(double c);
  static SigmaModel geometric(double a);
  static SigmaModel factorial_power(double alpha);
  static SigmaModel super_geometric(double theta);
  static SigmaModel explicit_list(std::vector<double> values,
                                  family::Extension extension = family::Extension::error_beyond_end);
  static SigmaModel custom(std::function<double(std::uint64_t)> rule, Asymptotics asymptotics = {},
                           std::string label = "custom");
  static SigmaModel root_sum_squares(const SigmaModel& first, const SigmaModel& second);

  double sigma_at(std::uint64_t n) const;
  double log_sigma_at(std::uint64_t n) const;

  /// c * sigma_n. Asymptotic fields are unchanged since c^(1/n) -> 1.
  SigmaModel scaled(double c) const;
  /// max(n,1)^p * sigma_n. Asymptotic fields are unchanged since n^(p/n) -> 1.
  SigmaModel with_power_prefactor(double p) const;
  /// Same sequence with every analytic field dropped, forcing windowed estimates.
  SigmaModel numeric_only() const;

  const Family& family() const noexcept { return family_; }
  const Asymptotics& asymptotics() const noexcept { return asymptotics_; }
  double log_scale() const noexcept { return log_scale_; }
  double power_prefactor() const noexcept { return power_prefactor_; }

  /// Human-readable canonical description, also used for config hashing.
  std::string describe() const;

 private:
  SigmaModel(Family family, Asymptotics asymptotics, std::string label);

  double log_base(std::uint64_t n) const;

  Family family_;
  Asymptotics asymptotics_;
  std::string label_;
  double log_scale_ = 0.0;
  double power_prefactor_ = 0.0;
};

}  // namespace rpslab
