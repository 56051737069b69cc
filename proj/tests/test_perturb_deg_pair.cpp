// Copyright 2026 The wellsep Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include <doctest.h>

#include "helpers.hpp"
#include "wellsep/delta_analytic.hpp"
#include "wellsep/error.hpp"
#include "wellsep/greens.hpp"
#include "wellsep/perturb_deg_pair.hpp"
#include "wellsep/perturb_nondeg.hpp"

using namespace wellsep;
using wellsep::testing::DeltaPair;
using wellsep::testing::pair_config;

namespace {

PairBlock block_of(const DeltaPair& p) {
  return pair_block(p.k(), p.kbar(), p.s1->potential, p.s2->potential, QuadratureSpec{});
}

PairBlock synthetic(double gamma, double gap) {
  PairBlock b;
  b.gamma_el = gamma;
  b.gap = gap;
  b.eps_k = -0.5;
  b.u_kbar = -0.5 + gap;
  return b;
}

struct Mirror {
  DeltaPair p{1.0, 1.0, 5.0};
  PairBlock block = block_of(p);
  GreenOperator g1p{p.s1, p.k().energy, {"0"}};
  GreenOperator g2p{p.s2, p.k().energy, {"0"}};
  PairSolution second = pair_second_order(block, leading_mixing(block),
                                          pair_sandwiches(g1p, g2p, p.s1->potential, p.s2->potential, p.k(), p.kbar()));
};

const Mirror& mirror() {
  static const Mirror m;
  return m;
}

}  // namespace

TEST_CASE("block elements of equal wells") {
  const PairBlock& b = mirror().block;
  CHECK(b.gamma_el == doctest::Approx(-std::exp(-5.0)).epsilon(1e-12));
  CHECK(b.gamma_el == doctest::Approx(-6.73795e-3).epsilon(1e-5));
  CHECK(b.delta_ov == doctest::Approx(6.0 * std::exp(-5.0)).epsilon(1e-10));
  CHECK(b.delta_ov == doctest::Approx(4.04277e-2).epsilon(1e-5));
  CHECK(b.alpha == doctest::Approx(-std::exp(-10.0)).epsilon(1e-12));
  CHECK(b.alpha == doctest::Approx(-4.53999e-5).epsilon(1e-5));
  CHECK(std::abs(b.alpha - b.beta) < 1e-12);
  CHECK(b.gap == 0.0);
  // |Gamma| is of order |u| Delta.
  CHECK(std::abs(b.gamma_el) <= 2.0 * std::abs(b.u_kbar) * b.delta_ov);
}

TEST_CASE("leading mixing") {
  SUBCASE("exact degeneracy") {
    const PairSolution s = leading_mixing(synthetic(-0.01, 0.0));
    CHECK(s.plus().dE1 == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(s.minus().dE1 == doctest::Approx(-0.01).epsilon(1e-15));
    CHECK(std::abs(s.plus().b0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.plus().b0 * s.minus().b0 == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(s.plus().branch == Branch::Plus);
    CHECK(std::string(to_string(Branch::Minus)) == "minus");
  }
  SUBCASE("quadratic roots") {
    const PairSolution s = leading_mixing(synthetic(1.0, 1.5));
    CHECK(s.plus().b0 == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(s.minus().b0 == doctest::Approx(-0.5).epsilon(1e-15));
  }
  SUBCASE("product of roots and ordering") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 200; ++i) {
      const double g = u(rng);
      const double gap = 3.0 * u(rng);
      if (g == 0.0) continue;
      const PairSolution s = leading_mixing(synthetic(g, gap));
      CHECK(std::abs(s.plus().b0 * s.minus().b0 + 1.0) < 1e-12);
      CHECK(s.plus().dE1 >= s.minus().dE1);
    }
  }
  SUBCASE("far from degeneracy the small root is the ratio formula") {
    const double g = -6.73795e-3;
    const double gap = 0.1;
    const PairSolution s = leading_mixing(synthetic(g, gap));
    const PairBranch& small = std::abs(s.plus().b0) < std::abs(s.minus().b0) ? s.plus() : s.minus();
    CHECK(std::abs(small.b0 - g / -gap) < 0.05 * std::abs(small.b0));
    CHECK(std::abs(small.dE1 - g * g / -gap) < 0.05 * std::abs(small.dE1));
  }
  SUBCASE("zero coupling") {
    try {
      leading_mixing(synthetic(0.0, 0.0));
      FAIL("expected ZeroCoupling");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ZeroCoupling);
    }
  }
  SUBCASE("regime warning") {
    CHECK_FALSE(leading_mixing(synthetic(-0.01, 0.01)).regime_warning);
    CHECK(leading_mixing(synthetic(-0.01, 0.4)).regime_warning);
  }
}

TEST_CASE("first-order pair state") {
  const Mirror& m = mirror();
  const auto& p = m.p;
  const PairSolution s = leading_mixing(m.block);
  for (const PairBranch& br : s.branches) {
    CAPTURE(to_string(br.branch));
    const StateFunction d =
        pair_first_order_state(br.b0, m.g1p, m.g2p, p.s1->potential, p.s2->potential, p.k(), p.kbar());
    // Mirror symmetry about L/2: the correction shares the parity of b0.
    double asym = 0.0;
    for (double x = -3.0; x <= 8.0; x += 0.05) asym = std::max(asym, std::abs(d(5.0 - x) - br.b0 * d(x)));
    CHECK(asym < 1e-6);
  }
  // The G2' piece has no kbar component.
  const StateFunction piece = apply_green(m.g2p, Ket::apply(p.s2->potential, p.k().wavefunction));
  CHECK(std::abs(inner_product(p.kbar().wavefunction, piece, QuadratureSpec{})) < 1e-8);

  const StateFunction zero =
      pair_first_order_state(0.0, m.g1p, m.g2p, p.s1->potential, Potential::delta(0.0, 5.0), p.k(), p.kbar());
  for (double x : {-2.0, 0.0, 2.5, 5.0, 7.0}) CHECK(zero(x) == 0.0);
  CHECK_THROWS_AS(pair_first_order_state(1.0, m.g2p, m.g2p, p.s1->potential, p.s2->potential, p.k(), p.kbar()),
                  Error);
}

TEST_CASE("second order for equal wells") {
  const PairSolution& s = mirror().second;
  REQUIRE(s.plus().dE2);
  REQUIRE(s.minus().dE2);
  REQUIRE(s.plus().b1);
  CHECK(std::abs(*s.plus().b1) < 1e-12);
  CHECK(std::abs(*s.minus().b1) < 1e-12);
  CHECK(std::abs(*s.plus().dE2 - *s.minus().dE2) < 1e-10);
  // What the expansion of the exact roots requires: g^2 (g L - 1/2) e^{-2 g L}.
  CHECK(*s.plus().dE2 == doctest::Approx(4.5 * std::exp(-10.0)).epsilon(1e-5));
}

TEST_CASE("second order against the quoted value") {
  // Quoted: -(g^2/2)(2 g L + 1) e^{-2 g L} = -2.49700e-4.
  CHECK(*mirror().second.plus().dE2 == doctest::Approx(-2.49700e-4).epsilon(1e-4));
}

TEST_CASE("splitting against the exact roots") {
  const Mirror& m = mirror();
  const auto roots = exact_pair_energies(pair_config(1.0, 1.0, 5.0));
  REQUIRE(roots.count == 2);
  const double eps = m.p.k().energy;
  const double upper = roots.energies[1];
  const double lower = roots.energies[0];
  const PairSolution& s = m.second;
  const double r1p = std::abs(eps + s.plus().dE1 - upper);
  const double r1m = std::abs(eps + s.minus().dE1 - lower);
  CHECK(r1p <= 2.0 * std::exp(-10.0) * 5.0);
  CHECK(r1m <= 2.0 * std::exp(-10.0) * 5.0);
  const double r2p = std::abs(eps + s.plus().dE1 + *s.plus().dE2 - upper);
  const double r2m = std::abs(eps + s.minus().dE1 + *s.minus().dE2 - lower);
  CHECK(r2p * 10.0 <= r1p);
  CHECK(r2m * 10.0 <= r1m);
}

TEST_CASE("crossover to the nondegenerate two-level term") {
  const DeltaPair p(1.0, 0.85, 6.0);
  const PairBlock b = block_of(p);
  const PairSolution s = leading_mixing(b);
  const PairBranch& kept = std::abs(s.plus().b0) < std::abs(s.minus().b0) ? s.plus() : s.minus();
  const PerturbationResult r = first_order(p.input(1));
  CHECK(kept.dE1 == doctest::Approx(r.diagnostics.green_bound).epsilon(1e-2));
}
