// Copyright 2026 The wellsep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef WELLSEP_PERTURB_DEG_MULTI_HPP
#define WELLSEP_PERTURB_DEG_MULTI_HPP

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "wellsep/greens.hpp"
#include "wellsep/spectrum.hpp"

namespace wellsep {

/// Exactly degenerate orbitals {k_mu} of H1 (N1 of them) and {kbar_nu} of
/// H2 (N2 <= N1).
struct MultiBlock {
  Eigen::MatrixXd alpha;  ///< N1 x N1, <k_mu|V2|k_nu>
  Eigen::MatrixXd beta;   ///< N2 x N2, <kbar_mu|V1|kbar_nu>
  Eigen::MatrixXd gamma;  ///< N1 x N2, <k_mu|V2|kbar_nu>
  Eigen::MatrixXd delta;  ///< N1 x N2, <k_mu|kbar_nu>
  int n1 = 0;
  int n2 = 0;
  /// max |<k_mu|V1|kbar_nu> - Gamma_mu nu|| (equal for exact degeneracy).
  double gamma_mismatch = 0.0;

  void validate() const;
  /// Block filled from given matrices (no states needed); shapes checked.
  static MultiBlock from_matrices(Eigen::MatrixXd alpha, Eigen::MatrixXd beta, Eigen::MatrixXd gamma,
                                  Eigen::MatrixXd delta);
};

struct PairedMode {
  double lambda = 0.0;  ///< > 0; first-order shifts are +lambda and -lambda
  Eigen::VectorXd u;    ///< N1, unit
  Eigen::VectorXd v;    ///< N2, unit, Gamma^T u = lambda v
  int multiplicity = 1;  ///< how many lambda coincide (1e-10 relative)
  std::optional<double> dE2;  ///< shared by both signs
};

struct KernelMode {
  Eigen::VectorXd U;  ///< N1, unit, Gamma^T U = 0
  std::optional<double> dE2;
};

struct MOSolution {
  std::vector<PairedMode> paired;  ///< descending lambda
  std::vector<KernelMode> kernel;
  /// Set by kernel_second_order when the effective matrix leaves some
  /// kernel eigenvalues coincident; the U basis is then not unique.
  bool kernel_basis_nonunique = false;
};

/// Tolerance under which two energies count as degenerate.
inline constexpr double kDegeneracyTolerance = 1e-9;

MultiBlock build_blocks(const std::vector<BoundState>& states1, const std::vector<BoundState>& states2,
                        const Potential& v1, const Potential& v2, const QuadratureSpec& spec);

/// Singular value decomposition of Gamma: lambda_I = singular values,
/// u_I, v_I the singular vectors, kernel = null space of Gamma^T. Equivalent
/// to diagonalizing [[0, Gamma], [Gamma^T, 0]].
MOSolution mo_eigensolve(const MultiBlock& block);

/// Sandwich matrices <k_mu|V2 G2' V2|k_nu> (N1 x N1) and
/// <kbar_mu|V1 G1' V1|kbar_nu> (N2 x N2).
struct MultiSandwiches {
  Eigen::MatrixXd s2;
  Eigen::MatrixXd s1;
};

MultiSandwiches multi_sandwiches(const GreenOperator& g1p, const GreenOperator& g2p, const Potential& v1,
                                 const Potential& v2, const std::vector<BoundState>& states1,
                                 const std::vector<BoundState>& states2);

/// N1 == N2 only:
///   dE2_I = u^T (alpha + s2) u / 2 + v^T (beta + s1) v / 2 - lambda u^T Delta v.
MOSolution multi_second_order(const MultiBlock& block, const MOSolution& sol, const MultiSandwiches& s);

/// N1 > N2 only: diagonalizes P (alpha + s2) P on the kernel of Gamma^T and
/// replaces the kernel modes by its eigenvectors.
MOSolution kernel_second_order(const MultiBlock& block, const MOSolution& sol, const MultiSandwiches& s);

/// Eigenvalues of the (N1+N2) block matrix, ascending; for tests.
Eigen::VectorXd block_spectrum(const MultiBlock& block);

}  // namespace wellsep

#endif  // WELLSEP_PERTURB_DEG_MULTI_HPP
