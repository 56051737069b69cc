// Copyright 2026 The wellsep Authors
// SPDX-License-Identifier: Apache-2.0

#include "wellsep/delta_analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "wellsep/error.hpp"
#include "wellsep/quadrature.hpp"

namespace wellsep {

namespace {

const double kInvSqrtPi = 1.0 / std::sqrt(std::numbers::pi);

void require_positive_strength(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw Error(ErrorCode::InvalidStrength, "delta strength must be positive, got " + std::to_string(gamma));
}

void require_nondegenerate(const DeltaPairConfig& c) {
  if (std::abs(c.gamma1 - c.gamma2) / c.gamma1 < c.degenerate_threshold)
    throw Error(ErrorCode::DegenerateStrengths,
                "gamma1 and gamma2 are within the degeneracy threshold; use the degenerate branch");
}

double pair_derivative(double g1, double g2, double L, double eta) {
  return 2.0 * eta - (g1 + g2) + 2.0 * L * g1 * g2 * std::exp(-2.0 * L * eta);
}

double polish_root(double g1, double g2, double L, double lo, double hi) {
  double plo = pair_polynomial(g1, g2, L, lo);
  while (hi - lo > 1e-8 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    const double pm = pair_polynomial(g1, g2, L, mid);
    if ((pm < 0.0) == (plo < 0.0)) {
      lo = mid;
      plo = pm;
    } else {
      hi = mid;
    }
  }
  double eta = 0.5 * (lo + hi);
  for (int it = 0; it < 50; ++it) {
    const double d = pair_derivative(g1, g2, L, eta);
    if (d == 0.0) break;
    const double step = pair_polynomial(g1, g2, L, eta) / d;
    eta -= step;
    if (std::abs(step) <= 1e-14 * eta) break;
  }
  return eta;
}

// Fourth-order one-sided derivative of f at x, stepping in direction dir.
double one_sided_slope(const StateFunction& f, double x, double dir) {
  const double h = 1e-4 * dir;
  return (-25.0 * f(x) + 48.0 * f(x + h) - 36.0 * f(x + 2 * h) + 16.0 * f(x + 3 * h) - 3.0 * f(x + 4 * h)) /
         (12.0 * h);
}

// int_Q^inf (q cos(qr) - g sin(qr)) / (q (q^2 + g^2)) dq, as the full-line
// value pi (2 e^{-gr} - 1) / 2g minus the finite part on [0, Q].
double even_tail_integral(double g, double q_cut, double r) {
  const NodeRule rule = composite_gauss_legendre(0.0, q_cut, std::min(0.5 * g, 2.0 / r));
  double head = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double q = rule.nodes[i];
    head += rule.weights[i] * (q * std::cos(q * r) - g * std::sin(q * r)) / (q * (q * q + g * g));
  }
  return 0.5 * std::numbers::pi * (2.0 * std::exp(-g * r) - 1.0) / g - head;
}

}  // namespace

void DeltaPairConfig::validate() const {
  units.validate();
  if (!(gamma1 > 0.0) || !std::isfinite(gamma1))
    throw Error(ErrorCode::InvalidStrength, "gamma1 must be positive");
  if (!(gamma2 >= 0.0) || !std::isfinite(gamma2))
    throw Error(ErrorCode::InvalidStrength, "gamma2 must be non-negative");
  if (!(separation_L > 0.0) || !std::isfinite(separation_L))
    throw Error(ErrorCode::InvalidArgument, "separation_L must be positive");
  if (!(degenerate_threshold >= 0.0))
    throw Error(ErrorCode::InvalidArgument, "degenerate_threshold must be non-negative");
}

DeltaPairConfig DeltaPairConfig::canonical(bool* swapped) const {
  validate();
  DeltaPairConfig c = *this;
  const bool swap = gamma2 > gamma1;
  if (swap) std::swap(c.gamma1, c.gamma2);
  if (swapped) *swapped = swap;
  return c;
}

BoundState delta_bound_state(double gamma, double center, const Units& units) {
  units.validate();
  require_positive_strength(gamma);
  const double g = units.strength_to_internal(gamma);
  const double amp = std::sqrt(g);
  const double reach = std::log(1.0 / kTailTolerance) / g;
  BoundState b;
  b.energy = units.energy_to_user(-0.5 * g * g);
  b.wavefunction = StateFunction([amp, g, center](double x) { return amp * std::exp(-g * std::abs(x - center)); },
                                 {center - reach, center + reach}, {center});
  b.label = "0";
  return b;
}

std::array<ContinuumFamily, 2> delta_continuum(double gamma, double center, const Units& units) {
  units.validate();
  require_positive_strength(gamma);
  const double g = units.strength_to_internal(gamma);
  ContinuumFamily even;
  even.label = "even";
  even.center = center;
  // cos(t + atan(g/q)) = (q cos t - g sin t) / sqrt(q^2 + g^2)
  even.wavefunction_at = [g, center](double q, double x) {
    const double t = q * std::abs(x - center);
    return kInvSqrtPi * (q * std::cos(t) - g * std::sin(t)) / std::sqrt(q * q + g * g);
  };
  even.asymptotic_amplitude = [](double) { return kInvSqrtPi; };
  even.asymptotic_phase = [g](double q) { return std::atan2(g, q); };
  // Integrating by parts on each side of the centre, <q|f> for large q is
  // -(2 g f(c) + [f'](c)) / (sqrt(pi) q sqrt(q^2 + g^2)) to leading order;
  // the bracket vanishes for anything obeying the delta matching condition.
  even.tail_source = [g, center](const StateFunction& f) {
    const Interval s = f.support();
    if (!(center > s.lo && center < s.hi)) return 0.0;
    return 2.0 * g * f(center) + one_sided_slope(f, center, 1.0) - one_sided_slope(f, center, -1.0);
  };
  even.tail_coefficient = [g](double q) { return -kInvSqrtPi / (q * std::sqrt(q * q + g * g)); };
  even.tail_profile = [g, center](double q_cut, double x) {
    return -even_tail_integral(g, q_cut, std::abs(x - center)) / std::numbers::pi;
  };

  ContinuumFamily odd;
  odd.label = "odd";
  odd.center = center;
  odd.wavefunction_at = [center](double q, double x) { return kInvSqrtPi * std::sin(q * (x - center)); };
  odd.asymptotic_amplitude = [](double) { return kInvSqrtPi; };
  odd.asymptotic_phase = [](double) { return 0.0; };
  return {std::move(even), std::move(odd)};
}

std::shared_ptr<const LocalSpectrum> delta_local_spectrum(double gamma, double center,
                                                          const Units& units) {
  units.validate();
  require_positive_strength(gamma);
  const double g = units.strength_to_internal(gamma);
  auto s = std::make_shared<LocalSpectrum>();
  s->bound.push_back(delta_bound_state(g, center, Units{}));
  auto fams = delta_continuum(g, center, Units{});
  s->continuum.assign(fams.begin(), fams.end());
  s->potential = Potential::delta(g, center);
  s->units = units;
  s->momentum_scale = g;
  return s;
}

double pair_polynomial(double g1, double g2, double L, double eta) {
  return eta * eta - (g1 + g2) * eta + g1 * g2 * (-std::expm1(-2.0 * L * eta));
}

PairEnergyRoots exact_pair_energies(const DeltaPairConfig& cfg) {
  cfg.validate();
  const double g1 = cfg.g1();
  const double g2 = cfg.g2();
  const double L = cfg.separation_L;
  const double top = g1 + g2;
  constexpr int kScan = 1000;

  auto P = [&](double eta) { return pair_polynomial(g1, g2, L, eta); };
  std::vector<double> etas;
  double prev_x = top / kScan;
  double prev = P(prev_x);
  // P(0) = 0 always. When P'(0) > 0 a shallow root can hide below the first
  // scan point; walk towards zero until P turns positive.
  if (pair_derivative(g1, g2, L, 0.0) > 0.0 && prev < 0.0) {
    double lo = prev_x;
    int k = 0;
    while (P(lo) < 0.0 && k++ < 200) lo *= 0.5;
    if (P(lo) <= 0.0)
      throw Error(ErrorCode::RootBracketingFailed, "could not isolate the shallow root near zero");
    etas.push_back(polish_root(g1, g2, L, lo, prev_x));
  }
  for (int i = 2; i <= kScan; ++i) {
    const double x = top * i / kScan;
    const double v = P(x);
    if (v == 0.0) {
      etas.push_back(x);
    } else if ((v < 0.0) != (prev < 0.0) && prev != 0.0) {
      etas.push_back(polish_root(g1, g2, L, prev_x, x));
    }
    prev_x = x;
    prev = v;
  }
  if (etas.empty() || etas.size() > 2)
    throw Error(ErrorCode::RootBracketingFailed,
                "expected one or two positive roots, found " + std::to_string(etas.size()));

  PairEnergyRoots out;
  std::sort(etas.begin(), etas.end(), std::greater<>());
  for (double eta : etas) {
    out.eta_values.push_back(cfg.units.strength_to_user(eta));
    out.energies.push_back(cfg.units.energy_to_user(-0.5 * eta * eta));
    out.residuals.push_back(P(eta));
  }
  out.count = static_cast<int>(etas.size());
  return out;
}

double asymptotic_pair_energy(const DeltaPairConfig& cfg) {
  const DeltaPairConfig c = cfg.canonical();
  const double g1 = c.g1();
  const double g2 = c.g2();
  if (g2 == 0.0) return c.units.energy_to_user(-0.5 * g1 * g1);
  require_nondegenerate(c);
  const double e = std::exp(-2.0 * g1 * c.separation_L);
  return c.units.energy_to_user(-0.5 * g1 * g1 * (1.0 + 2.0 * g2 / (g1 - g2) * e));
}

MatrixElementTerms delta_matrix_element_terms(const DeltaPairConfig& cfg) {
  const DeltaPairConfig c = cfg.canonical();
  const double g1 = c.g1();
  const double g2 = c.g2();
  MatrixElementTerms t;
  if (g2 == 0.0) return t;
  require_nondegenerate(c);
  const double e = std::exp(-2.0 * g1 * c.separation_L);
  t.term_i = c.units.energy_to_user(-g1 * g2 * e);
  t.term_ii = c.units.energy_to_user(-2.0 * g1 * g2 * g2 * g2 / (g1 * g1 - g2 * g2) * e);
  t.term_iii = c.units.energy_to_user(-g1 * g2 * g2 / (g1 + g2) * e);
  return t;
}

double first_order_pair_wavefunction(const DeltaPairConfig& cfg, double x) {
  bool swapped = false;
  const DeltaPairConfig c = cfg.canonical(&swapped);
  const double L = c.separation_L;
  if (swapped) x = L - x;
  const double g1 = c.g1();
  const double g2 = c.g2();
  if (g2 == 0.0) return std::sqrt(g1) * std::exp(-g1 * std::abs(x));
  require_nondegenerate(c);
  return std::sqrt(g1) * (std::exp(-g1 * std::abs(x)) +
                          g2 / (g1 - g2) * std::exp(-g1 * L) * std::exp(-g1 * std::abs(x - L)));
}

KappaFactors kappa_factors(const DeltaPairConfig& cfg) {
  const DeltaPairConfig c = cfg.canonical();
  const double g1 = c.g1();
  const double g2 = c.g2();
  const double L = c.separation_L;
  KappaFactors k;
  const double e1 = std::exp(-g1 * L);
  k.kappa1 = c.units.strength_to_user(g2 * (g1 * L - 0.5) * e1);
  if (g2 == 0.0) return k;
  require_nondegenerate(c);
  const double e2 = std::exp(-g2 * L);
  const double d = g1 - g2;
  const double s2 = g1 * g1 - g2 * g2;
  k.kappa2 = c.units.strength_to_user(g1 * g2 / d * (2.0 * g2 / (g1 + g2) * e2 - e1));
  // Natural-unit value is already hbar^2/(m*gamma) in user units.
  k.kappa2_prime = g2 * (L * d + 1.0) / (d * d) * e1 - 4.0 * g1 * g2 * g2 / (s2 * s2) * e2;
  return k;
}

double kappa2_prime_uncorrected(const DeltaPairConfig& cfg) {
  const DeltaPairConfig c = cfg.canonical();
  const double g1 = c.g1();
  const double g2 = c.g2();
  if (g2 == 0.0) return 0.0;
  require_nondegenerate(c);
  const double L = c.separation_L;
  const double d = g1 - g2;
  const double s2 = g1 * g1 - g2 * g2;
  return 4.0 * g1 * g2 *
         (-g2 / (s2 * s2) * std::exp(-g2 * L) + 1.0 / (g1 * g1 * d) * (g1 * L + g1 / d) * std::exp(-g1 * L));
}

}  // namespace wellsep
