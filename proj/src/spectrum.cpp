// Copyright 2026 The wellsep Authors
// SPDX-License-Identifier: Apache-2.0

#include "wellsep/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wellsep/error.hpp"

namespace wellsep {

namespace {

std::vector<double> merged_kinks(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Interval hull(const Interval& a, const Interval& b) {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

std::optional<Interval> intersect(const Interval& a, const Interval& b) {
  const double lo = std::max(a.lo, b.lo);
  const double hi = std::min(a.hi, b.hi);
  if (!(hi > lo)) return std::nullopt;
  return Interval{lo, hi};
}

// Fixed x-nodes fine enough for e^{iqx} with q up to q_top over the support
// of f, with kinks (and the scattering centre) as panel edges.
NodeRule x_rule_for(const StateFunction& f, double center, double q_top) {
  const Interval s = f.support();
  std::vector<double> cuts(f.kinks().begin(), f.kinks().end());
  cuts.push_back(center);
  double width = s.width() / 64.0;
  if (q_top > 0.0) width = std::min(width, std::numbers::pi / q_top);
  return composite_gauss_legendre(s.lo, s.hi, width, cuts);
}

}  // namespace

StateFunction::StateFunction()
    : impl_(std::make_shared<const Impl>(Impl{[](double) { return 0.0; }, {0.0, 0.0}, {}, {}})) {}

StateFunction::StateFunction(Eval f, Interval support, std::vector<double> kinks) {
  if (!f) throw Error(ErrorCode::InvalidArgument, "state function needs an evaluator");
  if (!(support.hi >= support.lo))
    throw Error(ErrorCode::InvalidArgument, "support interval is inverted");
  std::sort(kinks.begin(), kinks.end());
  kinks.erase(std::unique(kinks.begin(), kinks.end()), kinks.end());
  impl_ = std::make_shared<const Impl>(Impl{std::move(f), support, std::move(kinks), {}});
}

StateFunction StateFunction::scaled(double factor) const {
  auto self = impl_;
  StateFunction out;
  out.impl_ = std::make_shared<const Impl>(
      Impl{[self, factor](double x) { return factor * self->f(x); }, self->support, self->kinks, {}});
  return out;
}

StateFunction operator+(const StateFunction& a, const StateFunction& b) {
  auto pa = a.impl_;
  auto pb = b.impl_;
  return StateFunction([pa, pb](double x) { return pa->f(x) + pb->f(x); },
                       hull(pa->support, pb->support), merged_kinks(pa->kinks, pb->kinks));
}

StateFunction operator-(const StateFunction& a, const StateFunction& b) {
  return a + b.scaled(-1.0);
}

double SampledProfile::operator()(double offset) const {
  if (values.empty() || offset < lo || offset > hi) return 0.0;
  if (values.size() == 1) return values.front();
  const double h = (hi - lo) / static_cast<double>(values.size() - 1);
  const double t = (offset - lo) / h;
  const auto i = std::min(static_cast<std::size_t>(t), values.size() - 2);
  const double frac = t - static_cast<double>(i);
  return values[i] + frac * (values[i + 1] - values[i]);
}

Potential Potential::delta(double strength, double center) {
  Potential v;
  v.kind = Kind::DeltaSpike;
  v.strength = strength;
  v.center = center;
  v.validate();
  return v;
}

Potential Potential::sampled(double strength, double center, SampledProfile profile) {
  Potential v;
  v.kind = Kind::Sampled;
  v.strength = strength;
  v.center = center;
  v.profile = std::move(profile);
  v.validate();
  return v;
}

void Potential::validate() const {
  if (!std::isfinite(strength) || !std::isfinite(center))
    throw Error(ErrorCode::InvalidArgument, "potential strength and center must be finite");
  if (kind == Kind::Sampled) {
    if (!profile || profile->values.size() < 2 || !(profile->hi > profile->lo))
      throw Error(ErrorCode::InvalidArgument,
                  "sampled potential needs >= 2 samples on a non-empty support");
    for (double v : profile->values)
      if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "non-finite profile sample");
  }
}

double Potential::value(double x) const {
  if (kind != Kind::Sampled)
    throw Error(ErrorCode::InvalidArgument, "a delta spike has no pointwise value");
  return -strength * (*profile)(x - center);
}

Interval Potential::support() const {
  if (kind == Kind::DeltaSpike) return {center, center};
  return {center + profile->lo, center + profile->hi};
}

Ket Ket::apply(const Potential& v, const StateFunction& psi) {
  if (v.is_delta()) return Ket(std::nullopt, {{v.center, -v.strength * psi(v.center)}});
  const Interval s = v.support();
  const auto common = intersect(s, psi.support());
  if (!common) return Ket(std::nullopt, {});
  std::vector<double> kinks(psi.kinks().begin(), psi.kinks().end());
  const auto& prof = *v.profile;
  const double h = (prof.hi - prof.lo) / static_cast<double>(prof.values.size() - 1);
  for (std::size_t i = 0; i < prof.values.size(); ++i)
    kinks.push_back(v.center + prof.lo + h * static_cast<double>(i));
  Potential vc = v;
  return Ket(StateFunction([vc, psi](double x) { return vc.value(x) * psi(x); }, *common,
                           std::move(kinks)));
}

Ket Ket::scaled(double factor) const {
  std::optional<StateFunction> s;
  if (smooth_) s = smooth_->scaled(factor);
  std::vector<PointMass> pts = points_;
  for (auto& p : pts) p.weight *= factor;
  return Ket(std::move(s), std::move(pts));
}

Ket operator+(const Ket& a, const Ket& b) {
  std::optional<StateFunction> s;
  if (a.smooth_ && b.smooth_)
    s = *a.smooth_ + *b.smooth_;
  else if (a.smooth_)
    s = a.smooth_;
  else
    s = b.smooth_;
  std::vector<PointMass> pts = a.points_;
  for (const auto& p : b.points_) {
    auto it = std::find_if(pts.begin(), pts.end(),
                           [&](const PointMass& m) { return m.position == p.position; });
    if (it != pts.end())
      it->weight += p.weight;
    else
      pts.push_back(p);
  }
  return Ket(std::move(s), std::move(pts));
}

std::optional<Interval> Ket::extent() const {
  std::optional<Interval> out;
  if (smooth_) out = smooth_->support();
  for (const auto& p : points_) {
    const Interval pi{p.position, p.position};
    out = out ? hull(*out, pi) : pi;
  }
  return out;
}

const BoundState& LocalSpectrum::bound_state(std::string_view label) const {
  for (const auto& b : bound)
    if (b.label == label) return b;
  throw Error(ErrorCode::InvalidArgument, "no bound state labelled '" + std::string(label) + "'");
}

bool LocalSpectrum::has_bound_state(std::string_view label) const {
  return std::any_of(bound.begin(), bound.end(), [&](const BoundState& b) { return b.label == label; });
}

double LocalSpectrum::q_max(const QuadratureSpec& spec) const {
  return spec.q_max > 0.0 ? spec.q_max : kDefaultQMaxFactor * std::abs(momentum_scale);
}

double inner_product(const StateFunction& f, const StateFunction& g, const QuadratureSpec& spec) {
  const auto common = intersect(f.support(), g.support());
  if (!common) return 0.0;
  const auto kinks = merged_kinks(f.kinks(), g.kinks());
  // f(x)*g(x) is commutative, so swapping the arguments is bit-identical.
  return integrate([&](double x) { return f(x) * g(x); }, common->lo, common->hi, spec, kinks).value;
}

double overlap(const StateFunction& bra, const Ket& ket, const QuadratureSpec& spec) {
  double sum = 0.0;
  if (ket.smooth()) sum += inner_product(bra, *ket.smooth(), spec);
  for (const auto& p : ket.points()) sum += p.weight * bra(p.position);
  return sum;
}

double overlap(const Ket& a, const Ket& b, const QuadratureSpec& spec) {
  double sum = 0.0;
  if (a.smooth()) sum += overlap(*a.smooth(), b, spec);
  if (b.smooth())
    for (const auto& p : a.points()) sum += p.weight * (*b.smooth())(p.position);
  for (const auto& pa : a.points())
    for (const auto& pb : b.points())
      if (pa.position == pb.position)
        throw Error(ErrorCode::InvalidArgument,
                    "product of two point masses at the same position is undefined");
  return sum;
}

double matrix_element(const StateFunction& bra, const Potential& v, const StateFunction& ket,
                      const QuadratureSpec& spec) {
  v.validate();
  if (v.is_delta()) return -v.strength * (bra(v.center) * ket(v.center));
  if (v.strength == 0.0) return 0.0;
  auto common = intersect(v.support(), bra.support());
  if (common) common = intersect(*common, ket.support());
  if (!common) return 0.0;
  std::vector<double> kinks = merged_kinks(bra.kinks(), ket.kinks());
  const auto& prof = *v.profile;
  const double h = (prof.hi - prof.lo) / static_cast<double>(prof.values.size() - 1);
  for (std::size_t i = 0; i < prof.values.size(); ++i)
    kinks.push_back(v.center + prof.lo + h * static_cast<double>(i));
  return integrate([&](double x) { return v.value(x) * (bra(x) * ket(x)); }, common->lo, common->hi,
                   spec, kinks)
      .value;
}

double continuum_projection(const ContinuumFamily& family, double q, const Ket& ket,
                            const QuadratureSpec& spec) {
  double sum = 0.0;
  if (ket.smooth()) {
    const auto& f = *ket.smooth();
    std::vector<double> cuts(f.kinks().begin(), f.kinks().end());
    cuts.push_back(family.center);
    sum += integrate([&](double x) { return family.wavefunction_at(q, x) * f(x); }, f.support().lo,
                     f.support().hi, spec, cuts, q)
               .value;
  }
  for (const auto& p : ket.points()) sum += p.weight * family.wavefunction_at(q, p.position);
  return sum;
}

std::vector<double> continuum_projection_table(const ContinuumFamily& family,
                                               std::span<const double> q_nodes, const Ket& ket,
                                               const QuadratureSpec& /*spec*/) {
  std::vector<double> out(q_nodes.size(), 0.0);
  if (ket.smooth()) {
    const auto& f = *ket.smooth();
    double q_top = 0.0;
    for (double q : q_nodes) q_top = std::max(q_top, std::abs(q));
    const NodeRule xr = x_rule_for(f, family.center, q_top);
    std::vector<double> fw(xr.size());
    for (std::size_t i = 0; i < xr.size(); ++i) fw[i] = xr.weights[i] * f(xr.nodes[i]);
    for (std::size_t j = 0; j < q_nodes.size(); ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < xr.size(); ++i) s += fw[i] * family.wavefunction_at(q_nodes[j], xr.nodes[i]);
      out[j] = s;
    }
  }
  for (const auto& p : ket.points())
    for (std::size_t j = 0; j < q_nodes.size(); ++j)
      out[j] += p.weight * family.wavefunction_at(q_nodes[j], p.position);
  return out;
}

CompletenessReport check_completeness(const LocalSpectrum& spectrum, const StateFunction& test_fn,
                                      const QuadratureSpec& q_spec) {
  q_spec.validate();
  CompletenessReport rep;
  const Interval s = test_fn.support();
  const double pad = 0.25 * s.width();
  const Interval box{s.lo - pad, s.hi + pad};
  const double q_max = spectrum.q_max(q_spec);

  // The reconstruction integrand oscillates in q at rate |x - c| + |x' - c|.
  double reach = 0.0;
  for (const auto& fam : spectrum.continuum)
    reach = std::max({reach, std::abs(box.lo - fam.center), std::abs(box.hi - fam.center)});
  const NodeRule qr = composite_gauss_legendre(0.0, q_max, std::numbers::pi / (2.0 * reach + 1.0));

  std::vector<double> bound_coeff;
  for (const auto& b : spectrum.bound) {
    const double c = inner_product(b.wavefunction, test_fn, q_spec);
    bound_coeff.push_back(c);
    rep.bound_weight += c * c;
  }
  std::vector<std::vector<double>> cont_coeff;
  const Ket ket(test_fn);
  for (const auto& fam : spectrum.continuum) {
    auto tab = continuum_projection_table(fam, qr.nodes, ket, q_spec);
    for (std::size_t j = 0; j < qr.size(); ++j) {
      rep.continuum_weight += qr.weights[j] * tab[j] * tab[j];
      tab[j] *= qr.weights[j];
    }
    cont_coeff.push_back(std::move(tab));
  }

  // Closed-form tail above the cutoff, where the family supplies one.
  std::vector<double> tail_src;
  for (const auto& fam : spectrum.continuum) {
    const bool has_tail = fam.tail_source && fam.tail_profile && fam.tail_coefficient;
    tail_src.push_back(has_tail ? fam.tail_source(test_fn) : 0.0);
    if (tail_src.back() == 0.0) continue;
    // q = q_max / t maps the tail onto (0, 1].
    const double w = integrate(
                         [&](double t) {
                           const double s = fam.tail_coefficient(q_max / t);
                           return s * s * q_max / (t * t);
                         },
                         0.0, 1.0, q_spec)
                         .value;
    rep.tail_weight += tail_src.back() * tail_src.back() * w;
  }
  rep.continuum_weight += rep.tail_weight;

  std::vector<double> cuts(test_fn.kinks().begin(), test_fn.kinks().end());
  for (const auto& fam : spectrum.continuum) cuts.push_back(fam.center);
  const NodeRule xr =
      composite_gauss_legendre(box.lo, box.hi, std::min(box.width() / 64.0, std::numbers::pi / q_max), cuts);
  double res2 = 0.0;
  double norm2 = 0.0;
  for (std::size_t i = 0; i < xr.size(); ++i) {
    const double x = xr.nodes[i];
    double rec = 0.0;
    for (std::size_t b = 0; b < spectrum.bound.size(); ++b)
      rec += bound_coeff[b] * spectrum.bound[b].wavefunction(x);
    for (std::size_t f = 0; f < spectrum.continuum.size(); ++f) {
      const auto& fam = spectrum.continuum[f];
      for (std::size_t j = 0; j < qr.size(); ++j) rec += cont_coeff[f][j] * fam.wavefunction_at(qr.nodes[j], x);
      if (tail_src[f] != 0.0) rec += tail_src[f] * fam.tail_profile(q_max, x);
    }
    const double fx = test_fn(x);
    res2 += xr.weights[i] * (fx - rec) * (fx - rec);
    norm2 += xr.weights[i] * fx * fx;
  }
  rep.residual = std::sqrt(res2);
  rep.norm = std::sqrt(norm2);
  return rep;
}

}  // namespace wellsep
