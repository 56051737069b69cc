// Copyright 2026 The wellsep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef WELLSEP_TESTS_HELPERS_HPP
#define WELLSEP_TESTS_HELPERS_HPP

#include <cmath>
#include <memory>

#include "wellsep/delta_analytic.hpp"
#include "wellsep/perturb_nondeg.hpp"
#include "wellsep/spectrum.hpp"

namespace wellsep::testing {

inline DeltaPairConfig pair_config(double g1, double g2, double L) {
  DeltaPairConfig c;
  c.gamma1 = g1;
  c.gamma2 = g2;
  c.separation_L = L;
  return c;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

// Two delta wells, natural units, well 1 at the origin hosting |k>.
struct DeltaPair {
  double g1;
  double g2;
  double L;
  std::shared_ptr<const LocalSpectrum> s1;
  std::shared_ptr<const LocalSpectrum> s2;

  DeltaPair(double a, double b, double sep)
      : g1(a), g2(b), L(sep), s1(delta_local_spectrum(a, 0.0, {})), s2(delta_local_spectrum(b, sep, {})) {}

  const BoundState& k() const { return s1->bound.front(); }
  const BoundState& kbar() const { return s2->bound.front(); }

  NondegInput input(int order = 1) const {
    NondegInput in;
    in.reference_state = k();
    in.spectrum1 = s1;
    in.spectrum2 = s2;
    in.v1 = s1->potential;
    in.v2 = s2->potential;
    in.order = order;
    return in;
  }

  double exact_shift() const {
    return exact_pair_energies(pair_config(g1, g2, L)).energies.front() - k().energy;
  }
};

inline StateFunction gaussian(double center, double width) {
  const double reach = width * std::sqrt(2.0 * std::log(1e12));
  return StateFunction([=](double x) { return std::exp(-0.5 * (x - center) * (x - center) / (width * width)); },
                       {center - reach, center + reach});
}

// Five-point second derivative.
template <class F>
double second_derivative(const F& f, double x, double h) {
  return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h);
}

}  // namespace wellsep::testing

#endif  // WELLSEP_TESTS_HELPERS_HPP
