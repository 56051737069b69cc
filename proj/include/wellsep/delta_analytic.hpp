// Copyright 2026 The wellsep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef WELLSEP_DELTA_ANALYTIC_HPP
#define WELLSEP_DELTA_ANALYTIC_HPP

#include <array>
#include <memory>
#include <vector>

#include "wellsep/spectrum.hpp"
#include "wellsep/units.hpp"

namespace wellsep {

/// Two attractive delta wells, V1 = -gamma1*delta(x) and
/// V2 = -gamma2*delta(x - L). Strengths are in user units.
struct DeltaPairConfig {
  double gamma1 = 2.0;
  double gamma2 = 1.0;
  double separation_L = 3.0;
  Units units;
  /// |gamma1 - gamma2| / gamma1 below which the nondegenerate expansion is
  /// refused with DegenerateStrengths.
  double degenerate_threshold = 0.05;

  /// Throws on invalid values; gamma2 == 0 is allowed (no second well).
  void validate() const;
  /// Returns a copy with gamma1 >= gamma2, mirroring the geometry so the
  /// deeper well sits at the origin. `swapped` reports whether it happened.
  DeltaPairConfig canonical(bool* swapped = nullptr) const;

  /// Internal (natural-unit) decay constants m*gamma/hbar^2.
  double g1() const { return units.strength_to_internal(gamma1); }
  double g2() const { return units.strength_to_internal(gamma2); }
};

/// eta is in strength units (E = -m eta^2 / 2 hbar^2), deepest root first.
struct PairEnergyRoots {
  std::vector<double> eta_values;
  std::vector<double> energies;    ///< user units, strictly increasing
  int count = 0;
  std::vector<double> residuals;   ///< transcendental residual per root
};

struct KappaFactors {
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  double kappa2_prime = 0.0;
};

struct MatrixElementTerms {
  double term_i = 0.0;    ///< <1|V2|1>
  double term_ii = 0.0;   ///< bound-state part of <1|V2 G2 V2|1>
  double term_iii = 0.0;  ///< continuum part of <1|V2 G2 V2|1>

  double sum() const { return term_i + term_ii + term_iii; }
};

/// Normalized bound state of -gamma*delta(x - center); label "0", energy in
/// user units.
BoundState delta_bound_state(double gamma, double center, const Units& units);

/// Even ("cos") and odd ("sin") continuum families of the same well.
std::array<ContinuumFamily, 2> delta_continuum(double gamma, double center, const Units& units);

/// Complete local spectrum of a single attractive delta well, natural units
/// throughout (the stored potential carries the internal strength).
std::shared_ptr<const LocalSpectrum> delta_local_spectrum(double gamma, double center,
                                                          const Units& units);

/// eta^2 - (g1+g2) eta + g1 g2 (1 - e^{-2 L eta}), internal units.
double pair_polynomial(double g1, double g2, double L, double eta);

/// All bound states of the pair: bracketing scan, bisection, Newton polish.
PairEnergyRoots exact_pair_energies(const DeltaPairConfig& cfg);

/// Leading asymptotic energy of the deeper state (user units).
double asymptotic_pair_energy(const DeltaPairConfig& cfg);

/// Closed forms of the three leading-shift contributions (user units).
MatrixElementTerms delta_matrix_element_terms(const DeltaPairConfig& cfg);

/// Deep-well bound state plus its leading correction, at x.
double first_order_pair_wavefunction(const DeltaPairConfig& cfg, double x);

/// Stretching-factor coefficients of the second-order state correction,
/// internal units:
///   kappa1  = g1 g2 G1'(L, 0; eps1)
///   kappa2  = continuum part of g1 g2 G2(0, L; eps1)
///   kappa2' = continuum part of g1 g2 [G2^2](0, L; eps1)
KappaFactors kappa_factors(const DeltaPairConfig& cfg);

/// Alternate closed form of kappa2' whose e^{-g1 L} coefficient is four times
/// the one in kappa_factors. It does not match the operator sandwich; kept so
/// the discrepancy stays visible in the tests.
double kappa2_prime_uncorrected(const DeltaPairConfig& cfg);

}  // namespace wellsep

#endif  // WELLSEP_DELTA_ANALYTIC_HPP
