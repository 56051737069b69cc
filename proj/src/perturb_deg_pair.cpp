// Copyright 2026 The wellsep Authors
// SPDX-License-Identifier: Apache-2.0

#include "wellsep/perturb_deg_pair.hpp"

#include <cmath>

#include "wellsep/error.hpp"

namespace wellsep {

const char* to_string(Branch b) noexcept { return b == Branch::Plus ? "plus" : "minus"; }

PairBlock pair_block(const BoundState& k, const BoundState& kbar, const Potential& v1, const Potential& v2,
                     const QuadratureSpec& spec) {
  v1.validate();
  v2.validate();
  spec.validate();
  PairBlock b;
  b.alpha = matrix_element(k.wavefunction, v2, k.wavefunction, spec);
  b.beta = matrix_element(kbar.wavefunction, v1, kbar.wavefunction, spec);
  b.gamma_el = matrix_element(k.wavefunction, v2, kbar.wavefunction, spec);
  b.delta_ov = inner_product(k.wavefunction, kbar.wavefunction, spec);
  b.eps_k = k.energy;
  b.u_kbar = kbar.energy;
  b.gap = kbar.energy - k.energy;
  if (!std::isfinite(b.alpha) || !std::isfinite(b.beta) || !std::isfinite(b.gamma_el) ||
      !std::isfinite(b.delta_ov))
    throw Error(ErrorCode::NonConvergent, "pair block produced a non-finite matrix element");
  return b;
}

PairSolution leading_mixing(const PairBlock& block) {
  const double g = block.gamma_el;
  const double h = 0.5 * block.gap;
  if (g == 0.0) {
    if (block.gap == 0.0) throw Error(ErrorCode::ZeroCoupling, "Gamma = 0 with zero gap: degeneracy not lifted");
    throw Error(ErrorCode::ZeroCoupling, "Gamma = 0: mixing coefficient undefined");
  }
  // dE1 solves d^2 - gap d - Gamma^2 = 0; take the large root directly and
  // the small one from the product so neither suffers cancellation.
  const double r = std::hypot(h, g);
  double up = 0.0;
  double down = 0.0;
  if (h >= 0.0) {
    up = h + r;
    down = -g * g / up;
  } else {
    down = h - r;
    up = -g * g / down;
  }
  PairSolution s;
  s.branches[0] = PairBranch{Branch::Plus, up / g, up, {}, {}, {}};
  s.branches[1] = PairBranch{Branch::Minus, down / g, down, {}, {}, {}};
  s.regime_warning = std::abs(block.gap) > 0.5 * std::abs(block.u_kbar);
  return s;
}

StateFunction pair_first_order_state(double b0, const GreenOperator& g1p, const GreenOperator& g2p,
                                     const Potential& v1, const Potential& v2, const BoundState& k,
                                     const BoundState& kbar) {
  if (!g1p.excludes_own(k)) throw Error(ErrorCode::InvalidArgument, "g1p must exclude k");
  if (!g2p.excludes_own(kbar)) throw Error(ErrorCode::InvalidArgument, "g2p must exclude kbar");
  const StateFunction a = apply_green(g2p, Ket::apply(v2, k.wavefunction));
  if (b0 == 0.0) return a;
  return a + apply_green(g1p, Ket::apply(v1, kbar.wavefunction)).scaled(b0);
}

PairSandwiches pair_sandwiches(const GreenOperator& g1p, const GreenOperator& g2p, const Potential& v1,
                               const Potential& v2, const BoundState& k, const BoundState& kbar) {
  if (!g1p.excludes_own(k)) throw Error(ErrorCode::InvalidArgument, "g1p must exclude k");
  if (!g2p.excludes_own(kbar)) throw Error(ErrorCode::InvalidArgument, "g2p must exclude kbar");
  PairSandwiches s;
  s.s2 = green_sandwich(k.wavefunction, g2p, v2, k.wavefunction).total;
  s.s1 = green_sandwich(kbar.wavefunction, g1p, v1, kbar.wavefunction).total;
  return s;
}

PairSolution pair_second_order(const PairBlock& block, const PairSolution& sol, const PairSandwiches& s) {
  const double g = block.gamma_el;
  if (g == 0.0) throw Error(ErrorCode::ZeroCoupling, "Gamma = 0: mixing coefficient undefined");
  PairSolution out = sol;
  const double lead = ((block.beta - block.alpha) + (s.s1 - s.s2)) / (2.0 * g);
  for (auto& br : out.branches) {
    // 1 +/- x/sqrt(1+x^2) equals 2 b0^2 / (1 + b0^2) on the matching root,
    // which picks the sign without tracking it separately.
    const double b0sq = br.b0 * br.b0;
    const double b1 = lead * 2.0 * b0sq / (1.0 + b0sq);
    br.b1 = b1;
    br.dE2 = g * b1 + block.alpha + s.s2 - g * block.delta_ov * b0sq;
  }
  return out;
}

}  // namespace wellsep
