#include <gtest/gtest.h>

#include "morse/algebra.hpp"
#include "test_support.hpp"

using namespace morse;
using morse::testing::enumerate_product_counts;

namespace {

MorseDescriptor D(std::vector<Count> counts, bool oriented = false) {
  return MorseDescriptor::make(std::move(counts), oriented);
}

}  // namespace

TEST(Validate, TorusLikeDataIsValid) { EXPECT_TRUE(validate(D({1, 2, 1})).empty()); }

TEST(Validate, OddDimensionEulerCharacteristic) {
  auto problems = validate(D({2, 3}));
  ASSERT_EQ(problems.size(), 1u);
  EXPECT_NE(problems[0].find("Euler characteristic 0, got -1"), std::string::npos);
}

TEST(Validate, MorseInequalitiesWithBetti) {
  // 1 >= 1, 1 >= 0, 2 >= 1 and both alternating sums are 1 - 1 + 2 = 1 - 0 + 1 = 2.
  auto d = MorseDescriptor::make({1, 1, 2}, false, {}, std::vector<Count>{1, 0, 1});
  EXPECT_TRUE(validate(d).empty());
}

TEST(Validate, ReportsEveryViolation) {
  MorseDescriptor d = D({0, 2, 0});
  d.manifold.betti = std::vector<Count>{1, 0};
  d.manifold.token = CobordismToken(CobordismToken::Terms{{"P", 3}});
  auto problems = validate(d);
  // no minimum, no maximum, bad betti length, unreduced token
  EXPECT_EQ(problems.size(), 4u);
}

TEST(Validate, WeakMorseInequalityAndEulerMismatch) {
  auto d = MorseDescriptor::make({1, 0, 1}, false, {}, std::vector<Count>{1, 2, 1});
  auto problems = validate(d);
  ASSERT_EQ(problems.size(), 2u);
  EXPECT_NE(problems[0].find("weak Morse inequality"), std::string::npos);
  EXPECT_NE(problems[1].find("Euler characteristic"), std::string::npos);
}

TEST(Validate, PoincareDualityWhenOriented) {
  auto d = MorseDescriptor::make({1, 2, 2}, true, {}, std::vector<Count>{1, 1, 2});
  auto problems = validate(d);
  ASSERT_FALSE(problems.empty());
  EXPECT_NE(problems[0].find("Poincare"), std::string::npos);
}

TEST(Validate, ShapeAndNegativeEntries) {
  MorseDescriptor d = D({1, -1, 1});
  EXPECT_EQ(validate(d).size(), 1u);
  d.counts.dimension = 3;
  EXPECT_FALSE(validate(d).empty());
}

TEST(Validate, EmptyDescriptorIsValid) {
  EXPECT_TRUE(validate(MorseDescriptor::empty(3, true)).empty());
}

TEST(EulerCharacteristic, Examples) {
  EXPECT_EQ(euler_characteristic(D({1, 1, 2})), 2);
  EXPECT_EQ(euler_characteristic(D({1, 2, 1})), 0);
  EXPECT_EQ(euler_characteristic(MorseDescriptor::empty(4, false)), 0);
}

TEST(Phi, Examples) {
  EXPECT_EQ(phi(D({1, 1, 2}), 2), 1);
  EXPECT_EQ(phi(D({1, 0, 0, 1}), 3), 0);
  const auto d = D({3, 1, 4, 1, 5});
  for (int j = 0; j <= 4; ++j) EXPECT_EQ(phi(d, j), -phi(d, 4 - j));
}

TEST(Phi, RejectsOutOfRange) {
  EXPECT_THROW(phi(D({1, 1, 2}), 3), PreconditionError);
  EXPECT_THROW(phi(D({1, 1, 2}), -1), PreconditionError);
}

TEST(DisjointUnion, Examples) {
  EXPECT_EQ(disjoint_union(D({1, 1}), D({2, 2})).counts.counts, (std::vector<Count>{3, 3}));
  const auto d = MorseDescriptor::make({1, 2, 1}, false, CobordismToken::generator("T"),
                                       std::vector<Count>{1, 2, 1});
  EXPECT_EQ(disjoint_union(d, MorseDescriptor::empty(2, false)), d);
  EXPECT_EQ(disjoint_union(MorseDescriptor::empty(2, false), d), d);

  const auto p = MorseDescriptor::make({1, 1, 1}, false, CobordismToken::generator("P"));
  EXPECT_TRUE(disjoint_union(p, p).manifold.token.is_zero());
}

TEST(DisjointUnion, BettiDroppedUnlessBothKnown) {
  const auto with = MorseDescriptor::make({1, 0, 1}, false, {}, std::vector<Count>{1, 0, 1});
  EXPECT_FALSE(disjoint_union(with, D({1, 0, 1})).manifold.betti.has_value());
  EXPECT_EQ(*disjoint_union(with, with).manifold.betti, (std::vector<Count>{2, 0, 2}));
}

TEST(DisjointUnion, RejectsMismatch) {
  EXPECT_THROW(disjoint_union(D({1, 1}), D({1, 0, 1})), PreconditionError);
  EXPECT_THROW(disjoint_union(D({1, 1}, true), D({1, 1}, false)), PreconditionError);
}

TEST(Negate, Examples) {
  const auto d = MorseDescriptor::make({1, 1, 2}, true, CobordismToken::generator("A", 2));
  const auto n = negate(d);
  EXPECT_EQ(n.counts.counts, (std::vector<Count>{2, 1, 1}));
  EXPECT_EQ(n.manifold.token.coefficient("A"), -2);
  for (int j = 0; j <= 2; ++j) EXPECT_EQ(phi(n, j), -phi(d, j));
  EXPECT_EQ(negate(n), d);

  const auto u = MorseDescriptor::make({1, 1, 2}, false, CobordismToken::generator("P"));
  EXPECT_EQ(negate(u).manifold.token, u.manifold.token);
}

TEST(DiagonalProduct, MatchesEnumerationOracle) {
  struct Case {
    std::vector<Count> a, b;
  };
  for (const Case& c : {Case{{1, 1}, {1, 1}}, Case{{1, 0, 1}, {1, 0, 0, 1}},
                        Case{{2, 2}, {1, 1, 2}}}) {
    const auto expected = enumerate_product_counts(c.a, c.b);
    EXPECT_EQ(diagonal_product(D(c.a), D(c.b)).counts.counts, expected);
  }
  // Frozen from the oracle above.
  EXPECT_EQ(diagonal_product(D({1, 1}), D({1, 1})).counts.counts, (std::vector<Count>{1, 2, 1}));
  EXPECT_EQ(diagonal_product(D({1, 0, 1}), D({1, 0, 0, 1})).counts.counts,
            (std::vector<Count>{1, 0, 1, 1, 0, 1}));
  EXPECT_EQ(diagonal_product(D({2, 2}), D({1, 1, 2})).counts.counts,
            (std::vector<Count>{2, 4, 6, 4}));
}

TEST(DiagonalProduct, TokensAndBetti) {
  const auto s2 = MorseDescriptor::make({1, 0, 1}, true, CobordismToken::generator("S2"),
                                        std::vector<Count>{1, 0, 1});
  const auto t = MorseDescriptor::make({1, 2, 1}, true, CobordismToken::generator("T2", 3),
                                       std::vector<Count>{1, 2, 1});
  const auto p = diagonal_product(s2, t);
  EXPECT_EQ(p.dimension(), 4);
  EXPECT_EQ(p.manifold.token.coefficient("S2*T2"), 3);
  EXPECT_EQ(*p.manifold.betti, (std::vector<Count>{1, 2, 2, 2, 1}));
  EXPECT_EQ(diagonal_product(t, s2).manifold.token, p.manifold.token);

  const auto rp = MorseDescriptor::make({1, 1, 1}, false, CobordismToken::generator("P"));
  const auto two = diagonal_product(rp, rp);
  EXPECT_EQ(two.manifold.token.coefficient("P*P"), 1);
}

TEST(DiagonalProduct, RejectsOrientationMismatch) {
  EXPECT_THROW(diagonal_product(D({1, 1}, true), D({1, 1}, false)), PreconditionError);
}

TEST(MultiplyLabels, CanonicalOrder) {
  EXPECT_EQ(multiply_labels("B", "A"), "A*B");
  EXPECT_EQ(multiply_labels("A*C", "B"), "A*B*C");
  EXPECT_EQ(multiply_labels("C", "A*B"), multiply_labels("A*B", "C"));
}

TEST(Theorem3Phi, Examples) {
  // Values cross-checked against phi of the enumerated product.
  EXPECT_EQ(theorem3_phi(D({1, 1}), D({1, 1}), 0), 0);
  EXPECT_EQ(theorem3_phi(D({2, 2}), D({1, 1, 2}), 0), 2);
  EXPECT_EQ(theorem3_phi(D({1, 0, 1}), D({1, 0, 1}), 1), 0);

  auto via_oracle = [](std::vector<Count> a, std::vector<Count> b, int j) {
    const int m1 = static_cast<int>(a.size()) - 1;
    const int m2 = static_cast<int>(b.size()) - 1;
    const auto prod = enumerate_product_counts(a, b);
    const int top = m1 + m2 - j;
    return prod[static_cast<std::size_t>(top)] - prod[static_cast<std::size_t>(m1 + m2 - top)];
  };
  EXPECT_EQ(via_oracle({1, 1}, {1, 1}, 0), 0);
  EXPECT_EQ(via_oracle({2, 2}, {1, 1, 2}, 0), 2);
  EXPECT_EQ(via_oracle({1, 0, 1}, {1, 0, 1}, 1), 0);
}

TEST(Theorem3Phi, RejectsPreconditionViolations) {
  EXPECT_THROW(theorem3_phi(D({1, 1, 2}), D({1, 1}), 0), PreconditionError);
  EXPECT_THROW(theorem3_phi(D({1, 1}), D({1, 1, 2}), 1), PreconditionError);
  EXPECT_THROW(theorem3_phi(D({1, 1}), D({1, 1, 2}), -1), PreconditionError);
}

TEST(CobordismInvariant, Examples) {
  const auto a = cobordism_invariant(D({1, 0, 1}));
  EXPECT_TRUE(a.token.is_zero());
  EXPECT_EQ(a.phis, (std::vector<Count>{0}));
  EXPECT_FALSE(a.z2.has_value());

  // sigma = b_0 = 1, phi_0 = 0 -> z2 = 1.
  const auto b = cobordism_invariant(
      MorseDescriptor::make({1, 1}, true, {}, std::vector<Count>{1, 1}));
  EXPECT_TRUE(b.phis.empty());
  ASSERT_TRUE(b.z2.has_value());
  EXPECT_EQ(*b.z2, 1);

  const auto c = cobordism_invariant(D({1, 0, 2, 0, 1}));
  EXPECT_EQ(c.phis, (std::vector<Count>{0, 0}));
  EXPECT_EQ(c.phi(3), 0);
  EXPECT_THROW(c.phi(2), PreconditionError);
}

TEST(CobordismInvariant, PhiRangeLengths) {
  for (int m = 0; m <= 9; ++m) {
    const int begin = CobordismInvariant::phi_range_begin(m);
    const auto inv = cobordism_invariant(MorseDescriptor::empty(m, false));
    EXPECT_EQ(static_cast<int>(inv.phis.size()), std::max(0, m - begin + 1)) << "m=" << m;
  }
}

TEST(CobordismInvariant, MissingBettiNamesSigma) {
  try {
    cobordism_invariant(D({1, 2, 2, 2, 2, 1}, true));
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("sigma(M)"), std::string::npos);
  }
}

TEST(CobordismInvariant, Z2InDimensionFive) {
  // S^5 with the standard height function: sigma = 1, phi_4 and phi_5 are 0.
  const auto s5 = MorseDescriptor::make({1, 0, 0, 0, 0, 1}, true, CobordismToken::generator("S5"),
                                        std::vector<Count>{1, 0, 0, 0, 0, 1});
  const auto inv = cobordism_invariant(s5);
  ASSERT_TRUE(inv.z2.has_value());
  EXPECT_EQ(*inv.z2, 1);
  EXPECT_EQ(inv.phis, (std::vector<Count>{0, 0}));
  // One extra point each of index 2 and 3 keeps phi_2 = C_2 - C_3 and z2.
  const auto bumped = MorseDescriptor::make({1, 0, 1, 1, 0, 1}, true,
                                            CobordismToken::generator("S5"),
                                            std::vector<Count>{1, 0, 0, 0, 0, 1});
  EXPECT_EQ(cobordism_invariant(bumped).z2, inv.z2);
}

TEST(IsCobordant, Examples) {
  const auto d = D({1, 2, 1});
  EXPECT_TRUE(is_cobordant(d, d));
  const auto c1 = MorseDescriptor::make({1, 1}, false, CobordismToken::generator("S1"));
  const auto c3 = MorseDescriptor::make({3, 3}, false, CobordismToken::generator("S1"));
  EXPECT_TRUE(is_cobordant(c1, c3));
  EXPECT_FALSE(is_cobordant(D({1, 0, 1}), D({2, 1, 1})));
  EXPECT_THROW(is_cobordant(D({1, 1}), D({1, 0, 1})), PreconditionError);
  EXPECT_THROW(is_cobordant(D({1, 1}, true), D({1, 1})), PreconditionError);
}

TEST(Stabilize, Examples) {
  EXPECT_EQ(stabilize(D({1, 1}), 2).counts.counts, (std::vector<Count>{4, 4}));
  EXPECT_EQ(stabilize(D({1, 1, 2}), 1).counts.counts, (std::vector<Count>{2, 3, 3}));
  const auto d = D({3, 1, 4, 1, 5});
  EXPECT_EQ(stabilize(d, 0), d);
}

TEST(Stabilize, Modes) {
  EXPECT_EQ(stabilize(D({1, 1}), 2, ExtraMiddlePair::Off).counts.counts,
            (std::vector<Count>{3, 3}));
  EXPECT_EQ(stabilize(D({1, 1, 2}), 0, ExtraMiddlePair::On).counts.counts,
            (std::vector<Count>{1, 2, 3}));
  // m = 5: middle pair at indices 2 and 3.
  const auto s5 = D({1, 0, 0, 0, 0, 1});
  EXPECT_EQ(stabilize(s5, 1).counts.counts, (std::vector<Count>{2, 2, 3, 3, 2, 2}));
  EXPECT_EQ(stabilize(s5, 0).counts.counts, s5.counts.counts);
}

TEST(Stabilize, RejectsEmptyAndNegative) {
  EXPECT_THROW(stabilize(MorseDescriptor::empty(2, false), 1), PreconditionError);
  EXPECT_THROW(stabilize(D({1, 1}), -1), PreconditionError);
  EXPECT_THROW(stabilize(D({1}), 0, ExtraMiddlePair::On), PreconditionError);
}
