#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace men {

enum class ErrorCode {
  MissingBinding,
  InvalidAssignment,
  InvalidState,
  InvalidUnitary,
  ZeroProbabilityOutcome,
  InvalidPartition,
  NotSeparable,
  DegenerateState,
  ZeroReferenceAmplitude,
  ZeroAmplitude,
  InconsistentGraph,
  InvalidModel,
  EnumerationBoundExceeded,
  InvalidQuery,
  ZeroEvidenceProbability,
  NotAChain,
  NotAPrefix,
  WrongArity,
  AllBasesRejected,
  UnknownState,
  FileFormat,
};

/// Stable identifier, e.g. "ZeroProbabilityOutcome".
std::string_view error_name(ErrorCode code);

/// Stable one-line description used by the command line front end.
std::string_view error_summary(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace men
