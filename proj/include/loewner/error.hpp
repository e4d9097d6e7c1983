#pragma once

#include <stdexcept>
#include <string>

namespace loewner {

enum class ErrorCode {
  InvalidArgument,
  OutOfDomain,
  NotPointwise,
  PointOnSlit,
  PoleAt2,
  StepUnderflow,
  NewtonFailure,
  Degenerate,
  DisjointRanges,
  UnknownCheck,
};

const char* to_string(ErrorCode code);

/// Single exception type thrown by every public operation; the code tells
/// callers (and the CLI exit-code mapping) which contract was violated.
class LoewnerError : public std::runtime_error {
 public:
  LoewnerError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace loewner
