// Copyright 2026 The wellsep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef WELLSEP_PERTURB_DEG_PAIR_HPP
#define WELLSEP_PERTURB_DEG_PAIR_HPP

#include <array>
#include <optional>

#include "wellsep/greens.hpp"
#include "wellsep/spectrum.hpp"

namespace wellsep {

/// Matrix elements between the two (almost) degenerate orbitals |k> of H1
/// and |kbar> of H2, natural units.
struct PairBlock {
  double alpha = 0.0;     ///< <k|V2|k>
  double beta = 0.0;      ///< <kbar|V1|kbar>
  double gamma_el = 0.0;  ///< <k|V2|kbar>
  double delta_ov = 0.0;  ///< <k|kbar>
  double gap = 0.0;       ///< u_kbar - eps_k
  double eps_k = 0.0;
  double u_kbar = 0.0;
};

enum class Branch { Plus, Minus };

const char* to_string(Branch b) noexcept;

/// One root of the 2x2 problem. Plus is the higher-energy branch.
struct PairBranch {
  Branch branch = Branch::Plus;
  double b0 = 0.0;
  double dE1 = 0.0;
  std::optional<double> b1;
  std::optional<double> dE2;
  std::optional<StateFunction> state_correction;
};

struct PairSolution {
  std::array<PairBranch, 2> branches;  ///< {plus, minus}
  /// |gap| > 0.5 |u_kbar|: the almost-degenerate expansion is outside its
  /// regime.
  bool regime_warning = false;

  const PairBranch& plus() const { return branches[0]; }
  const PairBranch& minus() const { return branches[1]; }
};

PairBlock pair_block(const BoundState& k, const BoundState& kbar, const Potential& v1, const Potential& v2,
                     const QuadratureSpec& spec);

/// b0 and dE1 = Gamma b0 for both roots of b^2 - (gap/Gamma) b - 1 = 0.
PairSolution leading_mixing(const PairBlock& block);

/// G2' V2 |k> + b0 G1' V1 |kbar>. g1p must exclude k, g2p must exclude kbar.
StateFunction pair_first_order_state(double b0, const GreenOperator& g1p, const GreenOperator& g2p,
                                     const Potential& v1, const Potential& v2, const BoundState& k,
                                     const BoundState& kbar);

struct PairSandwiches {
  double s2 = 0.0;  ///< <k|V2 G2' V2|k>
  double s1 = 0.0;  ///< <kbar|V1 G1' V1|kbar>
};

/// Both sandwiches, resolvents taken at eps_k.
PairSandwiches pair_sandwiches(const GreenOperator& g1p, const GreenOperator& g2p, const Potential& v1,
                               const Potential& v2, const BoundState& k, const BoundState& kbar);

/// b1 and dE2 for both branches:
///   b1  = [(beta - alpha) + (s1 - s2)] / (2 Gamma) * (1 +/- x / sqrt(1 + x^2)),
///   x   = gap / (2 Gamma), the sign following the branch of b0,
///   dE2 = Gamma b1 + alpha + s2 - Gamma Delta b0^2.
PairSolution pair_second_order(const PairBlock& block, const PairSolution& sol, const PairSandwiches& s);

}  // namespace wellsep

#endif  // WELLSEP_PERTURB_DEG_PAIR_HPP
