// Copyright 2026 The wellsep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef WELLSEP_UNITS_HPP
#define WELLSEP_UNITS_HPP

namespace wellsep {

/// Physical constants of the one-particle problem.
///
/// Every numerical routine works in natural units (hbar = m = 1) with lengths
/// left untouched. Conversion happens only where user quantities enter or
/// leave the library:
///   strength  (energy*length): internal = strength * mass / hbar^2
///   energy:                    internal = energy   * mass / hbar^2
///   lengths, momenta, wavefunctions: unchanged
struct Units {
  double hbar = 1.0;
  double mass = 1.0;

  /// Throws InvalidArgument unless both constants are finite and positive.
  void validate() const;

  double scale() const { return mass / (hbar * hbar); }

  double strength_to_internal(double s) const { return s * scale(); }
  double strength_to_user(double s) const { return s / scale(); }
  double energy_to_internal(double e) const { return e * scale(); }
  double energy_to_user(double e) const { return e / scale(); }
};

}  // namespace wellsep

#endif  // WELLSEP_UNITS_HPP
