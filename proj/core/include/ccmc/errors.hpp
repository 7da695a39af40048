#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ccmc {

// Every failure the library raises carries one of these codes. The CLI maps
// them onto distinct process exit statuses.
enum class ErrorCode {
  kInvalidParameters,
  kParseError,
  kNotATree,
  kDistance2Violation,
  kDuplicateEdge,
  kUnknownNode,
  kNotInitialState,
  kMalformedColorMap,
  kDomainViolation,
  kInvariantBroken,
  kInsufficientTokens,
  kUnknownSender,
  kEmptyColorSet,
  kRoundBudgetExhausted,
  kClashAbort,
  kUnknownRoot,
  kPredicateNotSatisfied,
  kInstanceTooLarge,
  kInvalidDistance2Input,
  kMissingNode,
  kIncompleteTrace,
};

std::string_view to_string(ErrorCode code);

// Exit status used by the command-line tool for an error class. Zero and one
// are reserved for success and verification failure.
int exit_status(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ccmc
