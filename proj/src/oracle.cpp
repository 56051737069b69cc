// Copyright 2026 The wellsep Authors
// SPDX-License-Identifier: Apache-2.0

#include "wellsep/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include <fmt/format.h>
#include <lapacke.h>

#include "wellsep/error.hpp"

namespace wellsep {

namespace {

constexpr int kMinPoints = 64;
constexpr double kMarginDecayLengths = 8.0;

}  // namespace

GridSpec GridSpec::refined() const {
  GridSpec g = *this;
  g.n_points = 2 * n_points + 1;
  return g;
}

void GridSpec::validate() const {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min))
    throw Error(ErrorCode::InvalidArgument, "grid needs x_max > x_min");
  if (n_points < kMinPoints) throw Error(ErrorCode::InvalidArgument, "grid needs at least 64 points");
}

GridSpec aligned_grid(std::span<const double> centers, double margin, double max_spacing) {
  if (centers.empty()) throw Error(ErrorCode::InvalidArgument, "aligned_grid needs at least one centre");
  if (!(margin > 0.0) || !(max_spacing > 0.0))
    throw Error(ErrorCode::InvalidArgument, "margin and spacing must be positive");
  const auto [lo_it, hi_it] = std::minmax_element(centers.begin(), centers.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  double h = max_spacing;
  if (hi > lo) {
    const double span = hi - lo;
    h = span / std::ceil(span / max_spacing - 1e-12);
    for (double c : centers) {
      const double m = (c - lo) / h;
      if (std::abs(m - std::round(m)) > 1e-9)
        throw Error(ErrorCode::InvalidArgument, "centres are not commensurate with a common spacing");
    }
  }
  const double pad = std::ceil(margin / h) * h;
  GridSpec g;
  g.x_min = lo - pad;
  g.x_max = hi + pad;
  g.n_points = static_cast<int>(std::lround((g.x_max - g.x_min) / h)) - 1;
  g.validate();
  return g;
}

OracleResult grid_diagonalize(std::span<const Potential> potentials, const Units& units, const GridSpec& grid,
                              int n_eigs) {
  grid.validate();
  units.validate();
  if (n_eigs < 1 || n_eigs > grid.n_points) throw Error(ErrorCode::InvalidArgument, "n_eigs out of range");
  const int n = grid.n_points;
  const double h = grid.spacing();
  OracleResult out;
  out.grid = grid;

  std::vector<double> d(static_cast<std::size_t>(n), 1.0 / (h * h));
  std::vector<double> e(static_cast<std::size_t>(n - 1), -0.5 / (h * h));
  for (const auto& v : potentials) {
    v.validate();
    const double s = units.strength_to_internal(v.strength);
    const Interval reach = v.support();
    if (v.is_delta()) {
      const long i = std::lround((v.center - grid.x_min) / h) - 1;
      if (i < 0 || i >= n) throw Error(ErrorCode::InvalidArgument, "delta spike lies outside the grid box");
      d[static_cast<std::size_t>(i)] -= s / h;
      if (s > 0.0) {
        const double decay = kMarginDecayLengths / s;
        if (v.center - decay < grid.x_min || v.center + decay > grid.x_max)
          out.warnings.push_back(fmt::format("box margin around x = {} is below {} decay lengths", v.center,
                                             kMarginDecayLengths));
      }
    } else {
      for (int i = 0; i < n; ++i) {
        const double x = grid.node(i);
        if (reach.contains(x)) d[static_cast<std::size_t>(i)] += units.energy_to_internal(v.value(x));
      }
      if (reach.lo < grid.x_min || reach.hi > grid.x_max)
        out.warnings.push_back(fmt::format("potential centred at {} extends past the grid box", v.center));
    }
  }

  int found = 0;
  std::vector<double> w(static_cast<std::size_t>(n));
  std::vector<double> z(static_cast<std::size_t>(n) * static_cast<std::size_t>(n_eigs));
  std::vector<lapack_int> ifail(static_cast<std::size_t>(n));
  const double abstol = 2.0 * std::numeric_limits<double>::min();
  const lapack_int info = LAPACKE_dstevx(LAPACK_COL_MAJOR, 'V', 'I', n, d.data(), e.data(), 0.0, 0.0, 1, n_eigs,
                                         abstol, &found, w.data(), z.data(), n, ifail.data());
  if (info != 0 || found != n_eigs)
    throw Error(ErrorCode::ConvergenceFailure, fmt::format("tridiagonal eigensolver failed (info {})", info));

  const double norm = 1.0 / std::sqrt(h);
  for (int j = 0; j < n_eigs; ++j) {
    out.eigenvalues.push_back(units.energy_to_user(w[static_cast<std::size_t>(j)]));
    std::vector<double> vec(z.begin() + static_cast<std::ptrdiff_t>(j) * n,
                            z.begin() + static_cast<std::ptrdiff_t>(j + 1) * n);
    // LAPACK returns unit Euclidean norm; rescale to sum h psi^2 = 1 and fix
    // the sign so the largest component is positive.
    const auto big = std::max_element(vec.begin(), vec.end(), [](double a, double b) {
      return std::abs(a) < std::abs(b);
    });
    const double sign = *big < 0.0 ? -1.0 : 1.0;
    for (double& x : vec) x *= sign * norm;
    out.eigenvectors.push_back(std::move(vec));
  }
  return out;
}

RichardsonEstimate richardson(const OracleResult& coarse, const OracleResult& fine) {
  const GridSpec want = coarse.grid.refined();
  if (fine.grid.x_min != want.x_min || fine.grid.x_max != want.x_max || fine.grid.n_points != want.n_points)
    throw Error(ErrorCode::GridMismatch, "Richardson needs the same box with the spacing halved");
  const std::size_t m = std::min(coarse.eigenvalues.size(), fine.eigenvalues.size());
  RichardsonEstimate r;
  for (std::size_t i = 0; i < m; ++i) {
    const double ec = coarse.eigenvalues[i];
    const double ef = fine.eigenvalues[i];
    r.values.push_back((4.0 * ef - ec) / 3.0);
    r.errors.push_back(std::abs(ec - ef) / 3.0);
  }
  return r;
}

OracleResult grid_diagonalize_extrapolated(std::span<const Potential> potentials, const Units& units,
                                           const GridSpec& grid, int n_eigs) {
  auto coarse = std::async(std::launch::async, [&] { return grid_diagonalize(potentials, units, grid, n_eigs); });
  OracleResult fine = grid_diagonalize(potentials, units, grid.refined(), n_eigs);
  const OracleResult c = coarse.get();
  fine.richardson_estimate = richardson(c, fine);
  return fine;
}

}  // namespace wellsep
