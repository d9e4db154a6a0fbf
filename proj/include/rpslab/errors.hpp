#pragma once

#include <stdexcept>
#include <string>

namespace rpslab {

enum class ErrorKind {
  argument,
  model_evaluation,
  tail_model,
  insufficient_terms,
  no_plan,
  not_entire,
  degenerate_order,
  degenerate_series,
  grid_too_small,
  unreliable_estimate,
  inconclusive,
  validation,
  config,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can map it onto a stable exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when quadrature could neither certify finiteness nor divergence.
class InconclusiveError : public Error {
 public:
  InconclusiveError(const std::string& message, double partial_value);

  double partial_value() const noexcept { return partial_value_; }

 private:
  double partial_value_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace rpslab
