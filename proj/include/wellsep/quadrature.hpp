// Copyright 2026 The wellsep Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef WELLSEP_QUADRATURE_HPP
#define WELLSEP_QUADRATURE_HPP

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace wellsep {

enum class PanelRule { GaussKronrod15, GaussKronrod21 };

/// Tolerances and limits for every numerical integral in the library.
///
/// `q_max` truncates continuum (momentum) integrals. Zero selects
/// kDefaultQMaxFactor times the momentum scale of the spectrum involved. For
/// point-source Green kernels the free-particle part of the integrand is
/// subtracted and added back in closed form, so only the scattering part is
/// truncated; its remainder is bounded by g / (pi * q_max^2) per unit source
/// weight (delta of internal strength g) and, being oscillatory, is in
/// practice closer to 2g / (pi * R * q_max^3) for sources a distance R apart.
struct QuadratureSpec {
  double abs_tol = 1e-13;
  double rel_tol = 1e-10;
  double q_max = 0.0;
  PanelRule panel_rule = PanelRule::GaussKronrod15;
  bool oscillation_guard = true;
  int max_panels = 20000;

  void validate() const;
};

PanelRule parse_panel_rule(const std::string& name);
const char* to_string(PanelRule rule) noexcept;

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int panels = 0;
};

/// Global adaptive Gauss-Kronrod integration of f over [a, b].
///
/// Interior `breakpoints` always start a new panel (put kinks there). With
/// the oscillation guard on and `oscillation_rate` > 0 (the largest phase
/// rate of an e^{i*rate*t} factor in the integrand), initial panels are no
/// wider than one period (15 nodes per wavelength). Refinement bisects the worst panel until the
/// summed error estimate is below max(abs_tol, rel_tol*|I|); exceeding
/// `max_panels` throws NonConvergent. Reentrant.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadratureSpec& spec, std::span<const double> breakpoints = {},
                     double oscillation_rate = 0.0);

/// Fixed composite Gauss-Legendre node set, used where the same nodes must be
/// shared between many integrals (tabulated spectral coefficients).
struct NodeRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// Panels of width <= max_width with 10 Gauss-Legendre nodes each; interior
/// breakpoints start new panels.
NodeRule composite_gauss_legendre(double a, double b, double max_width,
                                  std::span<const double> breakpoints = {});

}  // namespace wellsep

#endif  // WELLSEP_QUADRATURE_HPP
