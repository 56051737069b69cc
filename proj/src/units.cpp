// Copyright 2026 The wellsep Authors
// SPDX-License-Identifier: Apache-2.0

#include "wellsep/units.hpp"

#include <cmath>

#include "wellsep/error.hpp"

namespace wellsep {

void Units::validate() const {
  if (!(hbar > 0.0) || !(mass > 0.0) || !std::isfinite(hbar) || !std::isfinite(mass))
    throw Error(ErrorCode::InvalidArgument, "hbar and mass must be finite and positive");
}

}  // namespace wellsep
