// Copyright 2026 The wellsep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef WELLSEP_ERROR_HPP
#define WELLSEP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace wellsep {

enum class ErrorCode {
  InvalidArgument,
  InvalidStrength,
  NonConvergent,
  RootBracketingFailed,
  DegenerateStrengths,
  EnergyCollision,
  DegeneracyDetected,
  ZeroCoupling,
  NotDegenerate,
  ShapeMismatch,
  UnresolvedDegeneracy,
  ConvergenceFailure,
  GridMismatch,
  ConfigInvalid,
  IoError,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so
// callers (and the C API) can route on it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wellsep

#endif  // WELLSEP_ERROR_HPP
