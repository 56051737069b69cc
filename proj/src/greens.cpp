// Copyright 2026 The wellsep Authors
// SPDX-License-Identifier: Apache-2.0

#include "wellsep/greens.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wellsep/error.hpp"

namespace wellsep {

namespace {

constexpr double kInvPi = 1.0 / std::numbers::pi;

double max_reach(const Interval& s, const LocalSpectrum& sp) {
  double r = 0.0;
  for (const auto& fam : sp.continuum)
    r = std::max({r, std::abs(s.lo - fam.center), std::abs(s.hi - fam.center)});
  return r;
}

double point_reach(std::span<const PointMass> pts, const LocalSpectrum& sp) {
  double r = 0.0;
  for (const auto& fam : sp.continuum)
    for (const auto& p : pts) r = std::max(r, std::abs(p.position - fam.center));
  return r;
}

// Free resolvent kernel -e^{-kappa|x-y|}/kappa at E = -kappa^2/2; its
// spectral integrand is cos(q(x-y))/pi / (E - q^2/2).
double free_kernel(double x, double y, double energy) {
  const double kappa = std::sqrt(-2.0 * energy);
  return -std::exp(-kappa * std::abs(x - y)) / kappa;
}

const SpectralExpansion* same_spectrum_expansion(const Ket& k, const LocalSpectrum* sp) {
  if (!k.smooth() || !k.points().empty()) return nullptr;
  const SpectralExpansion* e = k.smooth()->expansion();
  if (e && e->spectrum.get() == sp) return e;
  return nullptr;
}

// <b|ket> for a bound state of `sp`.
double bound_projection(const LocalSpectrum& sp, std::size_t b, const Ket& ket, const QuadratureSpec& spec) {
  if (const auto* e = same_spectrum_expansion(ket, &sp)) return e->bound_coeffs[b];
  return overlap(sp.bound[b].wavefunction, ket, spec);
}

// <fam q|ket>.
double family_projection(const LocalSpectrum& sp, std::size_t f, double q, const Ket& ket,
                         const QuadratureSpec& spec) {
  if (const auto* e = same_spectrum_expansion(ket, &sp); e && !e->has_table())
    return e->continuum_coefficient(f, q);
  return continuum_projection(sp.continuum[f], q, ket, spec);
}

}  // namespace

GreenOperator::GreenOperator(std::shared_ptr<const LocalSpectrum> spectrum, double evaluation_energy,
                             std::vector<std::string> excluded, QuadratureSpec q_spec)
    : spectrum_(std::move(spectrum)),
      energy_(evaluation_energy),
      excluded_(std::move(excluded)),
      q_spec_(q_spec) {
  if (!spectrum_) throw Error(ErrorCode::InvalidArgument, "Green operator needs a spectrum");
  q_spec_.validate();
  if (!(energy_ < 0.0) || !std::isfinite(energy_))
    throw Error(ErrorCode::InvalidArgument, "evaluation energy must be negative (bound-state resolvent)");
  for (const auto& label : excluded_)
    if (!spectrum_->has_bound_state(label))
      throw Error(ErrorCode::InvalidArgument, "excluded state '" + label + "' is not in the spectrum");
  for (const auto& b : spectrum_->bound) {
    if (!retains(b)) continue;
    if (std::abs(energy_ - b.energy) < kCollisionGap * std::max(1.0, std::abs(energy_)))
      throw Error(ErrorCode::EnergyCollision,
                  "evaluation energy coincides with retained bound state '" + b.label + "'");
  }
}

bool GreenOperator::retains(const BoundState& b) const {
  return std::find(excluded_.begin(), excluded_.end(), b.label) == excluded_.end();
}

bool GreenOperator::excludes_own(const BoundState& b) const {
  if (retains(b) || !spectrum_->has_bound_state(b.label)) return false;
  const BoundState& own = spectrum_->bound_state(b.label);
  const double c = spectrum_->potential.center;
  const double psi = own.wavefunction(c);
  return std::abs(own.energy - b.energy) <= 1e-12 * std::max(1.0, std::abs(own.energy)) &&
         std::abs(psi - b.wavefunction(c)) <= 1e-12 * std::max(1.0, std::abs(psi));
}

double SpectralExpansion::resolvent(double q) const {
  const double kin = 0.5 * q * q;
  double d = 1.0;
  for (double e : energies) d /= (e - kin);
  return d;
}

double SpectralExpansion::bound_part(double x) const {
  double s = 0.0;
  for (std::size_t b = 0; b < bound_coeffs.size(); ++b)
    if (bound_coeffs[b] != 0.0) s += bound_coeffs[b] * spectrum->bound[b].wavefunction(x);
  return s;
}

double SpectralExpansion::continuum_coefficient(std::size_t family, double q) const {
  const auto& fam = spectrum->continuum[family];
  double s = 0.0;
  for (const auto& p : sources) s += p.weight * fam.wavefunction_at(q, p.position);
  return s * resolvent(q);
}

double SpectralExpansion::continuum_part(double x) const {
  const auto& fams = spectrum->continuum;
  double total = 0.0;
  if (!sources.empty()) {
    const bool subtract = energies.size() == 1;
    double rate = 0.0;
    for (const auto& fam : fams)
      for (const auto& p : sources)
        rate = std::max(rate, std::abs(x - fam.center) + std::abs(p.position - fam.center));
    auto integrand = [&](double q) {
      double s = 0.0;
      for (const auto& fam : fams) {
        double proj = 0.0;
        for (const auto& p : sources) proj += p.weight * fam.wavefunction_at(q, p.position);
        s += fam.wavefunction_at(q, x) * proj;
      }
      if (subtract)
        for (const auto& p : sources) s -= p.weight * kInvPi * std::cos(q * (x - p.position));
      return s * resolvent(q);
    };
    total += integrate(integrand, 0.0, q_max, spec, {}, rate).value;
    if (subtract)
      for (const auto& p : sources) total += p.weight * free_kernel(x, p.position, energies.front());
  }
  if (has_table()) {
    for (std::size_t f = 0; f < fams.size(); ++f) {
      const auto& tab = table[f];
      double s = 0.0;
      for (std::size_t j = 0; j < table_q.size(); ++j) s += tab[j] * fams[f].wavefunction_at(table_q.nodes[j], x);
      total += s;
    }
  }
  return total;
}

StateFunction StateFunction::from_expansion(std::shared_ptr<const SpectralExpansion> expansion) {
  std::vector<double> kinks;
  for (const auto& p : expansion->sources) kinks.push_back(p.position);
  for (const auto& fam : expansion->spectrum->continuum) kinks.push_back(fam.center);
  for (std::size_t b = 0; b < expansion->bound_coeffs.size(); ++b) {
    const auto k = expansion->spectrum->bound[b].wavefunction.kinks();
    kinks.insert(kinks.end(), k.begin(), k.end());
  }
  auto e = expansion;
  StateFunction out([e](double x) { return (*e)(x); }, expansion->support, std::move(kinks));
  auto impl = std::const_pointer_cast<Impl>(out.impl_);
  impl->expansion = std::move(expansion);
  return out;
}

StateFunction apply_green(const GreenOperator& g, const StateFunction& f) {
  return apply_green(g, Ket(f));
}

StateFunction apply_green(const GreenOperator& g, const Ket& f) {
  const auto& sp = *g.spectrum();
  const double energy = g.evaluation_energy();
  auto out = std::make_shared<SpectralExpansion>();
  out->spectrum = g.spectrum();
  out->spec = g.q_spec();
  out->q_max = g.q_max();
  out->bound_coeffs.assign(sp.bound.size(), 0.0);

  const double kappa = std::sqrt(-2.0 * energy);
  const double spread = std::log(1.0 / kTailTolerance) / kappa;

  if (const auto* prev = same_spectrum_expansion(f, &sp)) {
    // Nested resolvent on the same spectrum: divide coefficients once more.
    *out = *prev;
    for (std::size_t b = 0; b < sp.bound.size(); ++b)
      out->bound_coeffs[b] = g.retains(sp.bound[b]) ? prev->bound_coeffs[b] / (energy - sp.bound[b].energy) : 0.0;
    out->energies.push_back(energy);
    if (out->has_table()) {
      for (auto& tab : out->table)
        for (std::size_t j = 0; j < tab.size(); ++j) tab[j] /= (energy - 0.5 * out->table_q.nodes[j] * out->table_q.nodes[j]);
    }
    out->support = {prev->support.lo - 0.5 * spread, prev->support.hi + 0.5 * spread};
    return StateFunction::from_expansion(std::move(out));
  }

  const auto ext = f.extent();
  if (!ext) {
    out->energies.push_back(energy);
    out->support = {0.0, 0.0};
    return StateFunction::from_expansion(std::move(out));
  }

  Interval support{ext->lo - spread, ext->hi + spread};
  for (std::size_t b = 0; b < sp.bound.size(); ++b) {
    if (!g.retains(sp.bound[b])) continue;
    const double c = overlap(sp.bound[b].wavefunction, f, g.q_spec());
    out->bound_coeffs[b] = c / (energy - sp.bound[b].energy);
    if (c != 0.0) {
      const auto& bs = sp.bound[b].wavefunction.support();
      support = {std::min(support.lo, bs.lo), std::max(support.hi, bs.hi)};
    }
  }
  out->energies.push_back(energy);
  out->sources.assign(f.points().begin(), f.points().end());
  out->support = support;

  if (f.smooth()) {
    const double rate = max_reach(support, sp) + max_reach(f.smooth()->support(), sp);
    out->table_q = composite_gauss_legendre(0.0, out->q_max, std::numbers::pi / std::max(rate, 1.0));
    const Ket smooth_only(*f.smooth());
    for (const auto& fam : sp.continuum) {
      auto tab = continuum_projection_table(fam, out->table_q.nodes, smooth_only, g.q_spec());
      for (std::size_t j = 0; j < tab.size(); ++j) {
        const double q = out->table_q.nodes[j];
        tab[j] *= out->table_q.weights[j] / (energy - 0.5 * q * q);
      }
      out->table.push_back(std::move(tab));
    }
  }
  return StateFunction::from_expansion(std::move(out));
}

SandwichValue green_sandwich(const Ket& bra, const GreenOperator& g, const Ket& ket) {
  const auto& sp = *g.spectrum();
  const auto& spec = g.q_spec();
  const double energy = g.evaluation_energy();
  SandwichValue v;
  if (bra.empty() || ket.empty()) return v;

  const auto* ket_exp = same_spectrum_expansion(ket, &sp);
  const auto* bra_exp = same_spectrum_expansion(bra, &sp);
  if ((bra.smooth() && !bra_exp) || (ket.smooth() && !ket_exp)) {
    // A generic smooth side has no cheap <q|.>; resolve the other side into
    // an expansion and integrate in x instead. G is symmetric.
    const bool ket_generic = ket.smooth() && !ket_exp;
    const bool bra_generic = bra.smooth() && !bra_exp;
    const bool swap = ket_generic && !bra_generic;
    const Ket& outer = swap ? ket : bra;
    const Ket& inner = swap ? bra : ket;
    const StateFunction x = apply_green(g, inner);
    v.total = overlap(x, outer, spec);
    const auto* e = x.expansion();
    for (std::size_t b = 0; b < sp.bound.size(); ++b)
      if (e->bound_coeffs[b] != 0.0) v.bound += e->bound_coeffs[b] * bound_projection(sp, b, outer, spec);
    v.continuum = v.total - v.bound;
    return v;
  }

  for (std::size_t b = 0; b < sp.bound.size(); ++b) {
    if (!g.retains(sp.bound[b])) continue;
    const double l = bound_projection(sp, b, bra, spec);
    if (l == 0.0) continue;
    v.bound += l * bound_projection(sp, b, ket, spec) / (energy - sp.bound[b].energy);
  }

  // Point-by-point pairs carry the slowly decaying part of the integrand;
  // remove it with the free kernel when there is a single resolvent factor.
  const bool subtract = !ket_exp && !bra_exp;
  const auto sources_of = [](const Ket& k, const SpectralExpansion* e) {
    return e ? std::span<const PointMass>(e->sources) : k.points();
  };
  const double rate = point_reach(sources_of(bra, bra_exp), sp) + point_reach(sources_of(ket, ket_exp), sp);
  auto integrand = [&](double q) {
    double s = 0.0;
    for (std::size_t f = 0; f < sp.continuum.size(); ++f)
      s += family_projection(sp, f, q, bra, spec) * family_projection(sp, f, q, ket, spec);
    if (subtract) {
      double sub = 0.0;
      for (const auto& a : bra.points())
        for (const auto& b : ket.points()) sub += a.weight * b.weight * kInvPi * std::cos(q * (a.position - b.position));
      s -= sub;
    }
    // Expansion coefficients already include their own resolvents.
    return s / (energy - 0.5 * q * q);
  };
  v.continuum = integrate(integrand, 0.0, g.q_max(), spec, {}, rate).value;
  if (subtract) {
    for (const auto& a : bra.points())
      for (const auto& b : ket.points()) v.continuum += a.weight * b.weight * free_kernel(a.position, b.position, energy);
  }
  v.total = v.bound + v.continuum;
  return v;
}

SandwichValue green_sandwich(const StateFunction& bra, const GreenOperator& g, const Potential& v_mid,
                             const StateFunction& ket) {
  return green_sandwich(bra, v_mid, g, v_mid, ket);
}

SandwichValue green_sandwich(const StateFunction& bra, const Potential& v_left, const GreenOperator& g,
                             const Potential& v_right, const StateFunction& ket) {
  return green_sandwich(Ket::apply(v_left, bra), g, Ket::apply(v_right, ket));
}

double expansion_overlap(const StateFunction& bra, const StateFunction& f, const QuadratureSpec& spec) {
  if (const SpectralExpansion* e = f.expansion()) {
    const auto& sp = *e->spectrum;
    for (std::size_t b = 0; b < sp.bound.size(); ++b)
      if (bra.same_object(sp.bound[b].wavefunction)) return e->bound_coeffs[b];
  }
  return inner_product(bra, f, spec);
}

}  // namespace wellsep
