// Copyright specradius contributors.
// SPDX-License-Identifier: Apache-2.0

#include "specradius/errors.hpp"

namespace specradius {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::EigenFailure: return "EigenFailure";
    case ErrorCode::IllConditionedEigenpair: return "IllConditionedEigenpair";
    case ErrorCode::InvalidStructure: return "InvalidStructure";
    case ErrorCode::DegenerateObjective: return "DegenerateObjective";
    case ErrorCode::InfeasibleEnergy: return "InfeasibleEnergy";
    case ErrorCode::FullySaturated: return "FullySaturated";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::SingularShift: return "SingularShift";
    case ErrorCode::MaxIterations: return "MaxIterations";
    case ErrorCode::EmptyCloud: return "EmptyCloud";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnsupportedField: return "UnsupportedField";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace specradius
