// Copyright 2026 The wellsep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef WELLSEP_ORACLE_HPP
#define WELLSEP_ORACLE_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wellsep/spectrum.hpp"
#include "wellsep/units.hpp"

namespace wellsep {

/// Dirichlet box [x_min, x_max] with n_points interior nodes
/// x_i = x_min + (i + 1) h, h = (x_max - x_min) / (n_points + 1).
struct GridSpec {
  double x_min = -12.0;
  double x_max = 12.0;
  int n_points = 4096;

  double spacing() const { return (x_max - x_min) / (n_points + 1); }
  double node(int i) const { return x_min + (i + 1) * spacing(); }
  /// Same box, spacing halved (n -> 2n + 1).
  GridSpec refined() const;
  void validate() const;
};

/// Box [lo - margin, hi + margin] around the given centres whose spacing
/// divides every centre offset exactly, at both h and h/2, with h no larger
/// than max_spacing. Keeps delta spikes on nodes.
GridSpec aligned_grid(std::span<const double> centers, double margin, double max_spacing);

struct RichardsonEstimate {
  std::vector<double> values;
  std::vector<double> errors;  ///< |E_h - E_{h/2}| / 3
};

struct OracleResult {
  std::vector<double> eigenvalues;  ///< user units, ascending
  std::vector<std::vector<double>> eigenvectors;  ///< sum_i h psi_i^2 = 1
  GridSpec grid;
  std::optional<RichardsonEstimate> richardson_estimate;
  std::vector<std::string> warnings;
};

/// Lowest n_eigs eigenpairs of the central-difference Hamiltonian
/// -hbar^2/2m d^2/dx^2 + sum V. A delta spike becomes -strength / h on the
/// nearest node; sampled potentials are evaluated at the nodes.
OracleResult grid_diagonalize(std::span<const Potential> potentials, const Units& units, const GridSpec& grid,
                              int n_eigs);

/// h^2 extrapolation (4 E_{h/2} - E_h) / 3. Throws GridMismatch unless the
/// boxes agree and the fine grid is coarse.refined().
RichardsonEstimate richardson(const OracleResult& coarse, const OracleResult& fine);

/// grid_diagonalize on `grid` and grid.refined() (run concurrently) with
/// the Richardson estimate attached to the fine result.
OracleResult grid_diagonalize_extrapolated(std::span<const Potential> potentials, const Units& units,
                                           const GridSpec& grid, int n_eigs);

}  // namespace wellsep

#endif  // WELLSEP_ORACLE_HPP
