// Copyright 2026 The wellsep Authors
// SPDX-License-Identifier: Apache-2.0

#include "wellsep/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "wellsep/error.hpp"

namespace wellsep {

namespace {

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <unsigned N>
Panel kronrod_panel(const std::function<double(double)>& f, double a, double b) {
  using Kronrod = boost::math::quadrature::gauss_kronrod<double, N>;
  using Gauss = boost::math::quadrature::gauss<double, (N - 1) / 2>;
  const auto& xk = Kronrod::abscissa();
  const auto& wk = Kronrod::weights();
  const auto& wg = Gauss::weights();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  // Boost stores the non-negative half of each rule. For an odd Gauss order
  // the Gauss nodes sit at the even Kronrod indices (centre included), for an
  // even order at the odd indices.
  constexpr bool odd_gauss = ((N - 1) / 2) % 2 == 1;
  std::array<double, N> fv{};
  const double f0 = f(mid);
  double kronrod = f0 * wk[0];
  double gauss = odd_gauss ? f0 * wg[0] : 0.0;
  for (unsigned i = 1; i < xk.size(); ++i) {
    const double dx = half * xk[i];
    fv[2 * i - 1] = f(mid + dx);
    fv[2 * i] = f(mid - dx);
    const double pair = fv[2 * i - 1] + fv[2 * i];
    kronrod += pair * wk[i];
    if ((i % 2 == 0) == odd_gauss) gauss += pair * wg[i / 2];
  }
  // QUADPACK-style error scaling: |K - G| is rescaled against the mean
  // absolute deviation of f, which is far less pessimistic on smooth panels.
  const double mean = 0.5 * kronrod;
  double resasc = wk[0] * std::abs(f0 - mean);
  for (unsigned i = 1; i < xk.size(); ++i)
    resasc += wk[i] * (std::abs(fv[2 * i - 1] - mean) + std::abs(fv[2 * i] - mean));
  kronrod *= half;
  gauss *= half;
  resasc *= std::abs(half);
  double err = std::abs(kronrod - gauss);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  err = std::max(err, 50.0 * std::numeric_limits<double>::epsilon() * std::abs(kronrod));
  return {a, b, kronrod, err};
}

Panel evaluate_panel(PanelRule rule, const std::function<double(double)>& f, double a, double b) {
  switch (rule) {
    case PanelRule::GaussKronrod21:
      return kronrod_panel<21>(f, a, b);
    case PanelRule::GaussKronrod15:
    default:
      return kronrod_panel<15>(f, a, b);
  }
}

std::vector<double> initial_edges(double a, double b, std::span<const double> breakpoints,
                                  double max_width) {
  std::vector<double> cuts{a};
  std::vector<double> inner;
  for (double p : breakpoints)
    if (p > a && p < b) inner.push_back(p);
  std::sort(inner.begin(), inner.end());
  inner.erase(std::unique(inner.begin(), inner.end()), inner.end());
  for (double p : inner) cuts.push_back(p);
  cuts.push_back(b);

  std::vector<double> edges{a};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    int pieces = 1;
    if (max_width > 0.0) pieces = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_width)));
    for (int k = 1; k <= pieces; ++k)
      edges.push_back(k == pieces ? hi : lo + (hi - lo) * k / pieces);
  }
  return edges;
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
    throw Error(ErrorCode::InvalidArgument, "quadrature tolerances must be positive");
  if (!(q_max >= 0.0) || !std::isfinite(q_max))
    throw Error(ErrorCode::InvalidArgument, "q_max must be finite and non-negative (0 = auto)");
  if (max_panels < 1) throw Error(ErrorCode::InvalidArgument, "max_panels must be >= 1");
}

PanelRule parse_panel_rule(const std::string& name) {
  if (name == "gk15") return PanelRule::GaussKronrod15;
  if (name == "gk21") return PanelRule::GaussKronrod21;
  throw Error(ErrorCode::InvalidArgument, "unknown panel rule '" + name + "' (expected gk15 or gk21)");
}

const char* to_string(PanelRule rule) noexcept {
  return rule == PanelRule::GaussKronrod21 ? "gk21" : "gk15";
}

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadratureSpec& spec, std::span<const double> breakpoints,
                     double oscillation_rate) {
  if (a == b) return {};
  if (b < a) {
    QuadResult r = integrate(f, b, a, spec, breakpoints, oscillation_rate);
    r.value = -r.value;
    return r;
  }
  double max_width = 0.0;
  if (spec.oscillation_guard && oscillation_rate > 0.0)
    max_width = 2.0 * std::numbers::pi / oscillation_rate;
  const auto edges = initial_edges(a, b, breakpoints, max_width);
  if (static_cast<int>(edges.size()) - 1 > spec.max_panels)
    throw Error(ErrorCode::NonConvergent, "initial partition exceeds the panel budget");

  std::priority_queue<Panel> heap;
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    Panel p = evaluate_panel(spec.panel_rule, f, edges[i], edges[i + 1]);
    total += p.value;
    total_err += p.error;
    heap.push(p);
  }

  int panels = static_cast<int>(heap.size());
  while (true) {
    const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
    if (total_err <= tol) break;
    // The running sums drift; recompute before deciding to refine further.
    double exact_total = 0.0;
    double exact_err = 0.0;
    {
      auto copy = heap;
      while (!copy.empty()) {
        exact_total += copy.top().value;
        exact_err += copy.top().error;
        copy.pop();
      }
    }
    total = exact_total;
    total_err = exact_err;
    if (total_err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) break;

    // Refine the worst panels in one batch to amortize the recount.
    const int batch = std::max(1, static_cast<int>(heap.size()) / 8);
    for (int k = 0; k < batch; ++k) {
      if (panels + 1 > spec.max_panels)
        throw Error(ErrorCode::NonConvergent,
                    "adaptive quadrature exceeded the panel budget (error estimate " +
                        std::to_string(total_err) + ")");
      Panel worst = heap.top();
      heap.pop();
      const double mid = 0.5 * (worst.a + worst.b);
      if (!(mid > worst.a && mid < worst.b))
        throw Error(ErrorCode::NonConvergent, "adaptive quadrature reached machine resolution");
      Panel left = evaluate_panel(spec.panel_rule, f, worst.a, mid);
      Panel right = evaluate_panel(spec.panel_rule, f, mid, worst.b);
      total += left.value + right.value - worst.value;
      total_err += left.error + right.error - worst.error;
      heap.push(left);
      heap.push(right);
      ++panels;
    }
  }
  return {total, total_err, panels};
}

NodeRule composite_gauss_legendre(double a, double b, double max_width,
                                  std::span<const double> breakpoints) {
  using Gauss = boost::math::quadrature::gauss<double, 10>;
  const auto& x = Gauss::abscissa();
  const auto& w = Gauss::weights();
  NodeRule rule;
  if (!(b > a)) return rule;
  const auto edges = initial_edges(a, b, breakpoints, max_width);
  rule.nodes.reserve((edges.size() - 1) * 10);
  rule.weights.reserve((edges.size() - 1) * 10);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double mid = 0.5 * (edges[i] + edges[i + 1]);
    const double half = 0.5 * (edges[i + 1] - edges[i]);
    for (std::size_t j = 0; j < x.size(); ++j) {
      rule.nodes.push_back(mid - half * x[j]);
      rule.weights.push_back(half * w[j]);
      if (x[j] != 0.0) {
        rule.nodes.push_back(mid + half * x[j]);
        rule.weights.push_back(half * w[j]);
      }
    }
  }
  return rule;
}

}  // namespace wellsep
