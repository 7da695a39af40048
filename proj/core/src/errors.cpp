#include "ccmc/errors.hpp"

namespace ccmc {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidParameters: return "InvalidParameters";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kNotATree: return "NotATree";
    case ErrorCode::kDistance2Violation: return "Distance2Violation";
    case ErrorCode::kDuplicateEdge: return "DuplicateEdge";
    case ErrorCode::kUnknownNode: return "UnknownNode";
    case ErrorCode::kNotInitialState: return "NotInitialState";
    case ErrorCode::kMalformedColorMap: return "MalformedColorMap";
    case ErrorCode::kDomainViolation: return "DomainViolation";
    case ErrorCode::kInvariantBroken: return "InvariantBroken";
    case ErrorCode::kInsufficientTokens: return "InsufficientTokens";
    case ErrorCode::kUnknownSender: return "UnknownSender";
    case ErrorCode::kEmptyColorSet: return "EmptyColorSet";
    case ErrorCode::kRoundBudgetExhausted: return "RoundBudgetExhausted";
    case ErrorCode::kClashAbort: return "ClashAbort";
    case ErrorCode::kUnknownRoot: return "UnknownRoot";
    case ErrorCode::kPredicateNotSatisfied: return "PredicateNotSatisfied";
    case ErrorCode::kInstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::kInvalidDistance2Input: return "InvalidDistance2Input";
    case ErrorCode::kMissingNode: return "MissingNode";
    case ErrorCode::kIncompleteTrace: return "IncompleteTrace";
  }
  return "Unknown";
}

int exit_status(ErrorCode code) {
  return 10 + static_cast<int>(code);
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail),
      code_(code) {}

}  // namespace ccmc
