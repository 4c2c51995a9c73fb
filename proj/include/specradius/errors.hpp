// Copyright specradius contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SPECRADIUS_ERRORS_HPP
#define SPECRADIUS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace specradius {

enum class ErrorCode {
  InvalidArgument,
  ShapeMismatch,
  EigenFailure,
  IllConditionedEigenpair,
  InvalidStructure,
  DegenerateObjective,
  InfeasibleEnergy,
  FullySaturated,
  TooLarge,
  SingularShift,
  MaxIterations,
  EmptyCloud,
  ParseError,
  UnsupportedField,
  IoError,
};

const char* error_code_name(ErrorCode code) noexcept;

/// The one exception type thrown by this library; code() identifies the condition.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace specradius

#endif  // SPECRADIUS_ERRORS_HPP
