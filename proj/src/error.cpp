// Copyright 2026 The wellsep Authors
// SPDX-License-Identifier: Apache-2.0

#include "wellsep/error.hpp"

namespace wellsep {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidStrength: return "InvalidStrength";
    case ErrorCode::NonConvergent: return "NonConvergent";
    case ErrorCode::RootBracketingFailed: return "RootBracketingFailed";
    case ErrorCode::DegenerateStrengths: return "DegenerateStrengths";
    case ErrorCode::EnergyCollision: return "EnergyCollision";
    case ErrorCode::DegeneracyDetected: return "DegeneracyDetected";
    case ErrorCode::ZeroCoupling: return "ZeroCoupling";
    case ErrorCode::NotDegenerate: return "NotDegenerate";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::UnresolvedDegeneracy: return "UnresolvedDegeneracy";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace wellsep
