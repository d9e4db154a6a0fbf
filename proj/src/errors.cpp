#include "rpslab/errors.hpp"

namespace rpslab {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::argument: return "argument error";
    case ErrorKind::model_evaluation: return "model-evaluation error";
    case ErrorKind::tail_model: return "tail-model error";
    case ErrorKind::insufficient_terms: return "insufficient-terms error";
    case ErrorKind::no_plan: return "no-plan error";
    case ErrorKind::not_entire: return "not-entire error";
    case ErrorKind::degenerate_order: return "degenerate-order error";
    case ErrorKind::degenerate_series: return "degenerate-series error";
    case ErrorKind::grid_too_small: return "grid-too-small error";
    case ErrorKind::unreliable_estimate: return "unreliable-estimate error";
    case ErrorKind::inconclusive: return "inconclusive error";
    case ErrorKind::validation: return "validation error";
    case ErrorKind::config: return "config error";
  }
  return "error";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

InconclusiveError::InconclusiveError(const std::string& message, double partial_value)
    : Error(ErrorKind::inconclusive, message), partial_value_(partial_value) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace rpslab
