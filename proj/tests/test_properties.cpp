// Invariants over seeded random pairs that complement the acceptance runs.

#include "pklt/rcc.hpp"

#include "generators.hpp"

#include <gtest/gtest.h>

using namespace pklt;

TEST(LocusAlgebra, PointsOnCurvesAreAbsorbed) {
  LocusComponent c{LocusComponent::Kind::curve, "L1", "L1", 0, {}};
  LocusComponent p{LocusComponent::Kind::point, "E1", "pt:E1", 0, {"L1", "L2"}};
  LocusComponent q{LocusComponent::Kind::point, "E2", "pt:E2", 0, {}};
  EXPECT_EQ(reduce({p, c, c}), (Locus{c}));
  EXPECT_TRUE(contains({c}, p));
  EXPECT_FALSE(contains({c}, q));
  EXPECT_TRUE(is_subset({p}, {c}));
  EXPECT_FALSE(is_subset({c}, {p}));
  EXPECT_EQ(locus_intersection({c, q}, {p, q}), (Locus{p, q}));
  EXPECT_EQ(locus_union({p}, {c}), (Locus{c}));
}

TEST(PairProperties, EpsLociGrowWithEps) {
  gen::Rng rng(555);
  const Rational steps[] = {0, Rational(1, 8), Rational(1, 4), Rational(1, 2), 1};
  for (int trial = 0; trial < 80; ++trial) {
    auto p = gen::random_pair(rng, 4);
    auto ledger = potential_ledger(p);
    Rational eps0 = stabilization_threshold(ledger);
    ASSERT_GT(eps0, 0);
    ASSERT_EQ(eps_spnklt(p, ledger, eps0 / 2), pnklt_locus(p, ledger)) << "trial " << trial;
    Locus prev;
    for (const auto& eps : steps) {
      Locus l = eps_spnklt(p, ledger, eps);
      ASSERT_TRUE(is_subset(prev, l)) << "trial " << trial;
      prev = std::move(l);
    }
  }
}

TEST(PairProperties, ClassificationIsConsistent) {
  gen::Rng rng(777);
  for (int trial = 0; trial < 120; ++trial) {
    auto p = gen::random_pair(rng, 5);
    PotentialReport r = classify_pair(p);  // asserts its own inclusions
    ASSERT_EQ(r.flags.potentially_klt, r.pnklt.empty());
    if (r.frak_a.neg_infinity) {
      ASSERT_FALSE(r.flags.potentially_lc);
    } else {
      ASSERT_LE(r.frak_a.value, 0);
      ASSERT_GE(r.frak_a.value, -1);
    }
    for (const auto& e : r.ledger.entries) {
      ASSERT_GE(e.sigma_num, 0);
      ASSERT_LE(e.pa, e.a);
    }
    if (p.delta().is_zero() && r.big) {
      auto rcc = surface_rcc_via_pnklt(p);
      ASSERT_EQ(rcc.rcc, is_rcc_locus(incidence_graph(p, r.pnklt)));
    }
  }
}

TEST(PairProperties, WitnessInclusion) {
  gen::Rng rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    auto p = gen::random_pair(rng, 3);
    // Witness 2·f_*N; only instances where f*D ≥ N are checked.
    RDivisor d = Rational(2) * push_forward(p.model(), p.top(), p.level(), p.top_decomposition().negative);
    try {
      auto w = check_witness(p, d);
      if (!w.dominates) continue;
      ASSERT_TRUE(w.inclusion) << "trial " << trial;
      ++checked;
    } catch (const PreconditionError&) {
    }
  }
  EXPECT_GT(checked, 0);
}
