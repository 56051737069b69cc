// Copyright 2026 The wellsep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef WELLSEP_GREENS_HPP
#define WELLSEP_GREENS_HPP

#include <memory>
#include <string>
#include <vector>

#include "wellsep/quadrature.hpp"
#include "wellsep/spectrum.hpp"

namespace wellsep {

/// Resolvent 1/(E - H) of one local Hamiltonian, expanded over its spectrum.
/// Bound states listed in `excluded` are dropped from the sum (projected
/// resolvent). Natural units; E must be negative.
class GreenOperator {
 public:
  GreenOperator(std::shared_ptr<const LocalSpectrum> spectrum, double evaluation_energy,
                std::vector<std::string> excluded = {}, QuadratureSpec q_spec = {});

  const std::shared_ptr<const LocalSpectrum>& spectrum() const { return spectrum_; }
  double evaluation_energy() const { return energy_; }
  const std::vector<std::string>& excluded() const { return excluded_; }
  const QuadratureSpec& q_spec() const { return q_spec_; }

  bool retains(const BoundState& b) const;
  /// True when b is one of this spectrum's own bound states and is dropped.
  /// Labels repeat across spectra, so energy and the value at the centre
  /// must match too.
  bool excludes_own(const BoundState& b) const;
  double q_max() const { return spectrum_->q_max(q_spec_); }

  /// Relative gap below which a retained bound energy collides with E.
  static constexpr double kCollisionGap = 1e-6;

 private:
  std::shared_ptr<const LocalSpectrum> spectrum_;
  double energy_;
  std::vector<std::string> excluded_;
  QuadratureSpec q_spec_;
};

/// The function produced by one or more resolvents acting on a source:
///   sum_b c_b psi_b(x) + sum_fam int_0^qmax dq psi_q(x) s_fam(q) D(q),
///   D(q) = prod_i 1/(E_i - q^2/2).
/// Point-mass sources keep s_fam(q) in closed form; smooth sources are
/// tabulated on a fixed q rule.
class SpectralExpansion {
 public:
  std::shared_ptr<const LocalSpectrum> spectrum;
  std::vector<double> bound_coeffs;
  std::vector<double> energies;
  std::vector<PointMass> sources;
  NodeRule table_q;
  /// table[fam][j] = W_j * D(q_j) * <q_j|smooth source>
  std::vector<std::vector<double>> table;
  QuadratureSpec spec;
  double q_max = 0.0;
  Interval support;

  double resolvent(double q) const;
  bool has_table() const { return !table_q.nodes.empty(); }

  double bound_part(double x) const;
  double continuum_part(double x) const;
  double operator()(double x) const { return bound_part(x) + continuum_part(x); }

  /// <q|this> for one family. Point sources only.
  double continuum_coefficient(std::size_t family, double q) const;
};

/// G|f>. Delta-potential sources (point masses) are projected by point
/// evaluation. A smooth input that is itself an expansion over the same
/// spectrum has its coefficients divided once more (nested resolvents).
StateFunction apply_green(const GreenOperator& g, const Ket& f);
StateFunction apply_green(const GreenOperator& g, const StateFunction& f);

struct SandwichValue {
  double total = 0.0;
  double bound = 0.0;
  double continuum = 0.0;
};

/// <bra|G|ket> with the bound and continuum contributions reported apart.
SandwichValue green_sandwich(const Ket& bra, const GreenOperator& g, const Ket& ket);

/// <bra|V G V|ket>.
SandwichValue green_sandwich(const StateFunction& bra, const GreenOperator& g, const Potential& v_mid,
                             const StateFunction& ket);

/// <bra|V_left G V_right|ket>.
SandwichValue green_sandwich(const StateFunction& bra, const Potential& v_left, const GreenOperator& g,
                             const Potential& v_right, const StateFunction& ket);

/// <bra|f>. When f is an expansion over a spectrum that has bra as one of
/// its bound states the coefficient is returned directly; otherwise this is
/// inner_product.
double expansion_overlap(const StateFunction& bra, const StateFunction& f, const QuadratureSpec& spec);

}  // namespace wellsep

#endif  // WELLSEP_GREENS_HPP
