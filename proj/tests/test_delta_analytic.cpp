// Copyright 2026 The wellsep Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "helpers.hpp"
#include "wellsep/delta_analytic.hpp"
#include "wellsep/error.hpp"
#include "wellsep/greens.hpp"

using namespace wellsep;
using wellsep::testing::pair_config;
using wellsep::testing::rel_diff;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("single delta bound state") {
  const BoundState b = delta_bound_state(2.0, 0.0, {});
  CHECK(b.energy == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(b.wavefunction(0.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(b.label == "0");
  CHECK(delta_bound_state(1.0, 4.0, {}).energy == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(code_of([] { delta_bound_state(0.0, 0.0, {}); }) == ErrorCode::InvalidStrength);
  CHECK(code_of([] { delta_bound_state(-1.0, 0.0, {}); }) == ErrorCode::InvalidStrength);

  // hbar = 2, m = 1: decay m*gamma/hbar^2 = 0.5, energy -m gamma^2 / 2 hbar^2.
  const BoundState u = delta_bound_state(2.0, 0.0, Units{2.0, 1.0});
  CHECK(u.energy == doctest::Approx(-0.5));
}

TEST_CASE("continuum families at the centre") {
  const auto fams = delta_continuum(1.5, 2.0, {});
  CHECK(fams[0].label == "even");
  CHECK(fams[1].label == "odd");
  for (double q : {0.1, 1.0, 7.0}) CHECK(fams[1].wavefunction_at(q, 2.0) == 0.0);
  CHECK(fams[0].wavefunction_at(1e6, 2.0) == doctest::Approx(1.0 / std::sqrt(std::numbers::pi)).epsilon(1e-6));
  CHECK(ContinuumFamily::energy_of(3.0) == 4.5);
  CHECK(code_of([] { delta_continuum(0.0, 0.0, {}); }) == ErrorCode::InvalidStrength);
}

TEST_CASE("exact pair energies") {
  SUBCASE("nondegenerate example") {
    const auto r = exact_pair_energies(pair_config(2.0, 1.0, 3.0));
    REQUIRE(r.count == 2);
    CHECK(r.energies[0] < r.energies[1]);
    CHECK(r.energies[0] == doctest::Approx(-2.0 - 2.4575e-5).epsilon(1e-9));
    CHECK(r.energies[0] + 2.0 == doctest::Approx(-2.458e-5).epsilon(1e-3));
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(std::abs(r.residuals[i]) < 1e-13);
      CHECK(std::abs(pair_polynomial(2.0, 1.0, 3.0, r.eta_values[i])) < 1e-13);
    }
  }
  SUBCASE("decoupled limit") {
    const auto r = exact_pair_energies(pair_config(2.0, 1.0, 40.0));
    REQUIRE(r.count == 2);
    CHECK(r.energies[0] == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(r.energies[1] == doctest::Approx(-0.5).epsilon(1e-14));
  }
  SUBCASE("close equal wells bind once") {
    CHECK(exact_pair_energies(pair_config(1.0, 1.0, 0.5)).count == 1);
    CHECK(exact_pair_energies(pair_config(1.0, 1.0, 1.2)).count == 2);
  }
  SUBCASE("equal strengths factorize") {
    for (double L : {1.5, 3.0, 5.0}) {
      const auto r = exact_pair_energies(pair_config(1.0, 1.0, L));
      REQUIRE(r.count == 2);
      for (std::size_t i = 0; i < 2; ++i) {
        const double eta = r.eta_values[i];
        CHECK(std::abs((eta - 1.0) * (eta - 1.0) - std::exp(-2.0 * L * eta)) < 1e-12);
        const double sign = i == 0 ? 1.0 : -1.0;
        CHECK(std::abs(eta - (1.0 + sign * std::exp(-L * eta))) < 1e-12);
      }
    }
  }
  SUBCASE("units scale the energies") {
    DeltaPairConfig c = pair_config(2.0, 1.0, 3.0);
    c.units = Units{1.0, 2.0};
    // m = 2 doubles the decay constants and the energy scale m*gamma^2.
    const auto r = exact_pair_energies(c);
    const auto n = exact_pair_energies(pair_config(4.0, 2.0, 3.0));
    CHECK(r.energies[0] == doctest::Approx(0.5 * n.energies[0]).epsilon(1e-13));
  }
}

TEST_CASE("asymptotic pair energy") {
  CHECK(asymptotic_pair_energy(pair_config(2.0, 1.0, 3.0)) ==
        doctest::Approx(-2.0 * (1.0 + 2.0 * std::exp(-12.0))).epsilon(1e-15));
  CHECK(asymptotic_pair_energy(pair_config(2.0, 1.0, 3.0)) == doctest::Approx(-2.0000245768).epsilon(1e-10));
  CHECK(asymptotic_pair_energy(pair_config(2.0, 0.0, 3.0)) == -2.0);
  CHECK(code_of([] { asymptotic_pair_energy(pair_config(1.0, 1.0, 3.0)); }) ==
        ErrorCode::DegenerateStrengths);
}

TEST_CASE("expansion error shrinks at the e^{-2 g1 L} rate") {
  // |exact - asymptotic| / |exact| = C e^{-2 g1 L}, C stable within 3x.
  double c_min = 1e300;
  double c_max = 0.0;
  for (double L : {2.0, 3.0, 4.0}) {
    const DeltaPairConfig c = pair_config(2.0, 1.0, L);
    const double exact = exact_pair_energies(c).energies.front() + 2.0;
    const double asym = asymptotic_pair_energy(c) + 2.0;
    const double C = std::abs(exact - asym) / std::abs(exact) / std::exp(-4.0 * L);
    c_min = std::min(c_min, C);
    c_max = std::max(c_max, C);
  }
  CHECK(c_max / c_min < 3.0);
}

TEST_CASE("matrix element terms") {
  const auto t = delta_matrix_element_terms(pair_config(2.0, 1.0, 3.0));
  const double e12 = std::exp(-12.0);
  CHECK(t.term_i == doctest::Approx(-2.0 * e12).epsilon(1e-14));
  CHECK(t.term_ii == doctest::Approx(-4.0 / 3.0 * e12).epsilon(1e-14));
  CHECK(t.term_iii == doctest::Approx(-2.0 / 3.0 * e12).epsilon(1e-14));
  CHECK(t.term_i == doctest::Approx(-1.22884e-5).epsilon(1e-5));
  CHECK(t.term_ii == doctest::Approx(-8.19227e-6).epsilon(1e-5));
  CHECK(t.term_iii == doctest::Approx(-4.09614e-6).epsilon(1e-5));
  CHECK(t.sum() == doctest::Approx(-2.45769e-5).epsilon(1e-5));

  const auto z = delta_matrix_element_terms(pair_config(2.0, 0.0, 3.0));
  CHECK(z.term_i == 0.0);
  CHECK(z.term_ii == 0.0);
  CHECK(z.term_iii == 0.0);
  CHECK(code_of([] { delta_matrix_element_terms(pair_config(1.0, 1.0, 3.0)); }) ==
        ErrorCode::DegenerateStrengths);
}

TEST_CASE("term sum equals the asymptotic shift") {
  std::mt19937_64 rng(20260417);
  std::uniform_real_distribution<double> ratio(1.2, 5.0);
  std::uniform_real_distribution<double> g2d(0.3, 2.0);
  std::uniform_real_distribution<double> Ld(1.0, 6.0);
  for (int i = 0; i < 20; ++i) {
    const double g2 = g2d(rng);
    const DeltaPairConfig c = pair_config(g2 * ratio(rng), g2, Ld(rng));
    // -2 g2/(g1 - g2) (g1^2/2) e^{-2 g1 L}, evaluated directly: going through
    // the total energy would cancel away most of the digits.
    const double shift =
        -2.0 * c.gamma2 / (c.gamma1 - c.gamma2) * 0.5 * c.gamma1 * c.gamma1 * std::exp(-2.0 * c.gamma1 * c.separation_L);
    CHECK(rel_diff(delta_matrix_element_terms(c).sum(), shift) < 1e-12);
  }
}

TEST_CASE("first-order pair wavefunction") {
  const DeltaPairConfig c = pair_config(2.0, 1.0, 3.0);
  CHECK(first_order_pair_wavefunction(c, 0.0) == doctest::Approx(std::sqrt(2.0) * (1.0 + std::exp(-12.0))).epsilon(1e-15));
  const DeltaPairConfig free = pair_config(2.0, 0.0, 3.0);
  const BoundState b = delta_bound_state(2.0, 0.0, {});
  for (double x : {-2.0, 0.0, 1.3, 3.0, 7.0}) CHECK(first_order_pair_wavefunction(free, x) == b.wavefunction(x));
}

TEST_CASE("kappa factors") {
  const auto k = kappa_factors(pair_config(2.0, 1.0, 3.0));
  CHECK(k.kappa1 == doctest::Approx(5.5 * std::exp(-6.0)).epsilon(1e-14));
  CHECK(k.kappa1 == doctest::Approx(1.3633e-2).epsilon(1e-4));
  CHECK(k.kappa2 == doctest::Approx(2.0 * (2.0 / 3.0 * std::exp(-3.0) - std::exp(-6.0))).epsilon(1e-14));
  CHECK(k.kappa2 == doctest::Approx(6.1425e-2).epsilon(1e-4));
  CHECK(code_of([] { kappa_factors(pair_config(1.0, 1.0, 3.0)); }) == ErrorCode::DegenerateStrengths);

  SUBCASE("each decays as the separation doubles") {
    for (double L : {2.0, 3.0, 4.0}) {
      const auto a = kappa_factors(pair_config(2.0, 1.0, L));
      const auto b = kappa_factors(pair_config(2.0, 1.0, 2.0 * L));
      CHECK(std::abs(b.kappa1) < std::abs(a.kappa1));
      CHECK(std::abs(b.kappa2) < std::abs(a.kappa2));
      CHECK(std::abs(b.kappa2_prime) < std::abs(a.kappa2_prime));
    }
  }

  SUBCASE("closed forms match their operator sandwiches") {
    for (double L : {2.0, 3.0}) {
      const DeltaPairConfig c = pair_config(2.0, 1.0, L);
      const auto s1 = delta_local_spectrum(2.0, 0.0, {});
      const auto s2 = delta_local_spectrum(1.0, L, {});
      const double eps = s1->bound.front().energy;
      const GreenOperator g1p(s1, eps, {"0"});
      const GreenOperator g2(s2, eps);
      const Ket at0({}, {PointMass{0.0, 1.0}});
      const Ket atL({}, {PointMass{L, 1.0}});
      const auto kf = kappa_factors(c);
      CHECK(rel_diff(2.0 * green_sandwich(atL, g1p, at0).total, kf.kappa1) < 1e-6);
      CHECK(rel_diff(2.0 * green_sandwich(at0, g2, atL).continuum, kf.kappa2) < 1e-6);
      const StateFunction twice = apply_green(g2, apply_green(g2, atL));
      const double k2p = 2.0 * twice.expansion()->continuum_part(0.0);
      CHECK(rel_diff(k2p, kf.kappa2_prime) < 1e-6);
      // The alternate closed form does not survive the same check.
      CHECK(rel_diff(k2p, kappa2_prime_uncorrected(c)) > 1e-2);
    }
  }
}
