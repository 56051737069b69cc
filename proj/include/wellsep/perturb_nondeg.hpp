// Copyright 2026 The wellsep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef WELLSEP_PERTURB_NONDEG_HPP
#define WELLSEP_PERTURB_NONDEG_HPP

#include <memory>
#include <optional>

#include "wellsep/greens.hpp"
#include "wellsep/spectrum.hpp"

namespace wellsep {

/// Reference state |k> of H1 = T + V1 perturbed by the distant V2. All
/// quantities in natural units.
struct NondegInput {
  BoundState reference_state;
  std::shared_ptr<const LocalSpectrum> spectrum1;
  std::shared_ptr<const LocalSpectrum> spectrum2;
  Potential v1;
  Potential v2;
  int order = 1;
  QuadratureSpec q_spec;
  /// |eps_k - u| < degeneracy_gap * |eps_k| for any bound energy u of H2
  /// raises DegeneracyDetected.
  double degeneracy_gap = 0.1;
  /// Divide the corrected state by its norm (off by default).
  bool normalize = false;

  void validate() const;
};

struct PerturbationDiagnostics {
  double first_order_term = 0.0;   ///< <k|V2|k>
  double green_sandwich = 0.0;     ///< <k|V2 G2 V2|k>
  double green_bound = 0.0;
  double green_continuum = 0.0;
  double second_order_term = 0.0;  ///< order-2 shift minus the two terms above
  double normalization_overlap = 0.0;  ///< <k|delta phi> (order 2 only)
  double stretching_factor = 0.0;  ///< e^{-sqrt(2|eps_k|) L}
};

struct PerturbationResult {
  int order = 1;
  double energy_shift = 0.0;
  double corrected_energy = 0.0;
  StateFunction state_correction;

  /// G2 V2 |k>.
  StateFunction first_order_state;
  /// G1' V1 G2 V2 |k> (order 2).
  std::optional<StateFunction> kappa_piece;
  /// G2 G2 V2 |k> (order 2); enters the correction multiplied by -dE1.
  std::optional<StateFunction> energy_piece;
  double first_order_shift = 0.0;

  PerturbationDiagnostics diagnostics;
};

PerturbationResult first_order(const NondegInput& inp);
PerturbationResult second_order(const NondegInput& inp, const PerturbationResult& first);

struct NaiveShifts {
  double e1 = 0.0;
  double e2 = 0.0;
};

/// Textbook shifts in the basis of H1: <k|V2|k> and
/// sum_{n != k} |<k|V2|n>|^2 / (eps_k - eps_n).
NaiveShifts naive_shifts(const NondegInput& inp);

/// <k|delta phi> for an unnormalized result.
double normalization_overlap(const NondegInput& inp, const PerturbationResult& r);

struct ResidualReport {
  double smooth_l2 = 0.0;      ///< L2 norm of the regular part on the grid
  double singular_weight = 0.0;  ///< root-sum-square of delta-function weights
};

/// (H - eps_k - dE)(|k> + |delta phi>) assembled from the resolvent
/// identities (so no numerical second derivatives are taken), split into a
/// regular part, measured in L2 on a Gauss-Legendre grid, and point masses
/// sitting on delta potentials.
ResidualReport residual_norm(const NondegInput& inp, const PerturbationResult& r);

}  // namespace wellsep

#endif  // WELLSEP_PERTURB_NONDEG_HPP
