// Copyright 2026 The wellsep Authors
// SPDX-License-Identifier: Apache-2.0

#include "wellsep/perturb_nondeg.hpp"

#include <cmath>

#include "wellsep/error.hpp"

namespace wellsep {

namespace {

GreenOperator g2_of(const NondegInput& inp) {
  return GreenOperator(inp.spectrum2, inp.reference_state.energy, {}, inp.q_spec);
}

GreenOperator g1p_of(const NondegInput& inp) {
  return GreenOperator(inp.spectrum1, inp.reference_state.energy, {inp.reference_state.label}, inp.q_spec);
}

double stretching(const NondegInput& inp) {
  const double L = std::abs(inp.v2.center - inp.v1.center);
  return std::exp(-std::sqrt(2.0 * std::abs(inp.reference_state.energy)) * L);
}

StateFunction normalized_correction(const NondegInput& inp, const StateFunction& dphi) {
  const StateFunction& k = inp.reference_state.wavefunction;
  const StateFunction phi = k + dphi;
  const double n = std::sqrt(inner_product(phi, phi, inp.q_spec));
  return phi.scaled(1.0 / n) - k;
}

}  // namespace

void NondegInput::validate() const {
  if (!spectrum1 || !spectrum2) throw Error(ErrorCode::InvalidArgument, "both local spectra are required");
  if (order != 1 && order != 2) throw Error(ErrorCode::InvalidArgument, "order must be 1 or 2");
  v1.validate();
  v2.validate();
  q_spec.validate();
  if (!(reference_state.energy < 0.0))
    throw Error(ErrorCode::InvalidArgument, "reference state must be bound (negative energy)");
  const auto& ref = spectrum1->bound_state(reference_state.label);
  if (std::abs(ref.energy - reference_state.energy) > 1e-12 * std::max(1.0, std::abs(ref.energy)))
    throw Error(ErrorCode::InvalidArgument, "reference state does not belong to spectrum1");
  if (!(degeneracy_gap >= 0.0)) throw Error(ErrorCode::InvalidArgument, "degeneracy_gap must be >= 0");
  const double eps = reference_state.energy;
  for (const auto& u : spectrum2->bound)
    if (std::abs(eps - u.energy) < degeneracy_gap * std::abs(eps))
      throw Error(ErrorCode::DegeneracyDetected,
                  "bound state '" + u.label + "' of H2 lies within the degeneracy gap of the reference energy");
}

PerturbationResult first_order(const NondegInput& inp) {
  inp.validate();
  const StateFunction& k = inp.reference_state.wavefunction;
  const GreenOperator g2 = g2_of(inp);
  const Ket v2k = Ket::apply(inp.v2, k);

  PerturbationResult r;
  r.order = 1;
  auto& d = r.diagnostics;
  d.first_order_term = matrix_element(k, inp.v2, k, inp.q_spec);
  const SandwichValue sw = green_sandwich(v2k, g2, v2k);
  d.green_sandwich = sw.total;
  d.green_bound = sw.bound;
  d.green_continuum = sw.continuum;
  d.stretching_factor = stretching(inp);

  r.energy_shift = d.first_order_term + d.green_sandwich;
  r.first_order_shift = r.energy_shift;
  r.corrected_energy = inp.reference_state.energy + r.energy_shift;
  r.first_order_state = apply_green(g2, v2k);
  r.state_correction = inp.normalize ? normalized_correction(inp, r.first_order_state) : r.first_order_state;
  return r;
}

PerturbationResult second_order(const NondegInput& inp, const PerturbationResult& first) {
  inp.validate();
  if (first.order != 1) throw Error(ErrorCode::InvalidArgument, "second_order needs an order-1 result");
  const StateFunction& k = inp.reference_state.wavefunction;
  const GreenOperator g2 = g2_of(inp);
  const GreenOperator g1p = g1p_of(inp);
  const StateFunction& dphi1 = first.first_order_state;
  const double de1 = first.first_order_shift;

  PerturbationResult r = first;
  r.order = 2;
  const StateFunction a = apply_green(g1p, Ket::apply(inp.v1, dphi1));
  const StateFunction b = apply_green(g2, dphi1);
  r.kappa_piece = a;
  r.energy_piece = b;
  const StateFunction dphi = dphi1 + a - b.scaled(de1);

  // dE = <k|V2|phi> / (1 + <k|delta phi>).
  const double numerator = matrix_element(k, inp.v2, k + dphi, inp.q_spec);
  const double ov = expansion_overlap(k, dphi1, inp.q_spec) + expansion_overlap(k, a, inp.q_spec) -
                    de1 * expansion_overlap(k, b, inp.q_spec);
  r.energy_shift = numerator / (1.0 + ov);
  r.corrected_energy = inp.reference_state.energy + r.energy_shift;
  r.diagnostics.normalization_overlap = ov;
  r.diagnostics.second_order_term =
      r.energy_shift - (r.diagnostics.first_order_term + r.diagnostics.green_sandwich);
  r.state_correction = inp.normalize ? normalized_correction(inp, dphi) : dphi;
  return r;
}

NaiveShifts naive_shifts(const NondegInput& inp) {
  inp.validate();
  const StateFunction& k = inp.reference_state.wavefunction;
  NaiveShifts s;
  s.e1 = matrix_element(k, inp.v2, k, inp.q_spec);
  if (inp.v2.strength == 0.0) return s;
  s.e2 = green_sandwich(k, inp.v2, g1p_of(inp), inp.v2, k).total;
  return s;
}

double normalization_overlap(const NondegInput& inp, const PerturbationResult& r) {
  if (r.order == 1) return expansion_overlap(inp.reference_state.wavefunction, r.first_order_state, inp.q_spec);
  return r.diagnostics.normalization_overlap;
}

ResidualReport residual_norm(const NondegInput& inp, const PerturbationResult& r) {
  const StateFunction& k = inp.reference_state.wavefunction;
  const StateFunction& dphi1 = r.first_order_state;
  const double de = r.energy_shift;
  Ket res;
  if (r.order == 1) {
    // (H - E)(k + G2 V2 k) = V1 dphi1 - dE (k + dphi1)
    res = Ket::apply(inp.v1, dphi1) + Ket((k + dphi1).scaled(-de));
  } else {
    // With A = G1' V1 dphi1, B = G2 dphi1 and phi = k + dphi1 + A - dE1 B:
    // (H - E) phi = k (<k|V1|dphi1> - dE) + (dE1 - dE) dphi1 - dE A
    //               + dE1 dE B + V2 A - dE1 V1 B
    const StateFunction& a = *r.kappa_piece;
    const StateFunction& b = *r.energy_piece;
    const double de1 = r.first_order_shift;
    const double kv1 = matrix_element(k, inp.v1, dphi1, inp.q_spec);
    const StateFunction smooth =
        k.scaled(kv1 - de) + dphi1.scaled(de1 - de) + a.scaled(-de) + b.scaled(de1 * de);
    res = Ket(smooth) + Ket::apply(inp.v2, a) + Ket::apply(inp.v1, b).scaled(-de1);
  }

  ResidualReport rep;
  if (res.smooth()) {
    const auto& f = *res.smooth();
    const double width = 1.0 / std::sqrt(2.0 * std::abs(inp.reference_state.energy));
    const NodeRule grid = composite_gauss_legendre(f.support().lo, f.support().hi, width,
                                                   std::vector<double>{inp.v1.center, inp.v2.center});
    double s = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double v = f(grid.nodes[i]);
      s += grid.weights[i] * v * v;
    }
    rep.smooth_l2 = std::sqrt(s);
  }
  double w2 = 0.0;
  for (const auto& p : res.points()) w2 += p.weight * p.weight;
  rep.singular_weight = std::sqrt(w2);
  return rep;
}

}  // namespace wellsep
