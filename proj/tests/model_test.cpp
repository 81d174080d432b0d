// Copyright 2026 The simauc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "simauc/model.hpp"

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace simauc {
namespace {

TEST(RationalTest, ParsesFractionsDecimalsAndIntegers) {
  EXPECT_EQ(Rational::parse("9/4"), Rational(9, 4));
  EXPECT_EQ(Rational::parse("2.25"), Rational(9, 4));
  EXPECT_EQ(Rational::parse("3"), Rational(3));
  EXPECT_EQ(Rational::parse("6/8").str(), "3/4");
  EXPECT_THROW(Rational::parse("1/0"), std::invalid_argument);
  EXPECT_THROW(Rational::parse("abc"), std::invalid_argument);
  EXPECT_LT(Rational(1, 3), Rational(1, 2));
}

TEST(BidGridTest, LevelsAreAlignedAndOrdered) {
  const BidGrid g(4, Rational(9, 4));
  EXPECT_EQ(g.num_levels(), 10);
  const auto levels = g.levels();
  ASSERT_EQ(levels.size(), 10u);
  EXPECT_EQ(levels.front(), Rational(0));
  EXPECT_EQ(levels.back(), Rational(9, 4));
  for (std::size_t k = 1; k < levels.size(); ++k) EXPECT_LT(levels[k - 1], levels[k]);
}

TEST(BidGridTest, RejectsMisalignedMaximum) {
  EXPECT_THROW(BidGrid(4, Rational::parse("2.3")), std::invalid_argument);
  EXPECT_THROW(BidGrid(0, Rational(1)), std::invalid_argument);
  EXPECT_NO_THROW(BidGrid(10, Rational::parse("2.3")));
}

TEST(BidGridTest, IndexRoundTrip) {
  const BidGrid g = BidGrid::from_ticks(3, 5);
  for (int k = 0; k < g.num_pairs(); ++k) EXPECT_EQ(g.index_of(g.pair_at(k)), k);
}

TEST(SynergyTest, Examples) {
  const auto additive = UtilitySpec::additive_synergy(0.3);
  EXPECT_DOUBLE_EQ(synergy(additive, {0.5, 0.5}), 0.3);
  EXPECT_DOUBLE_EQ(synergy(additive, {0.5, 0.0}), 0.0);
  const auto mult = UtilitySpec::multiplicative();
  // Three separate evaluations: u(0.5,0.4) = 0.2, u(0.5,0) = 0, u(0,0.4) = 0.
  EXPECT_DOUBLE_EQ(mult(0.5, 0.4) - mult(0.5, 0.0) - mult(0.0, 0.4), 0.2);
  EXPECT_DOUBLE_EQ(synergy(mult, {0.5, 0.4}), 0.2);
}

TEST(SynergyTest, PolynomialEvaluation) {
  // 2 x1 + 3 x2 + 4 x1 x2 + 5 x1^2
  const auto u = UtilitySpec::polynomial({{0, 3}, {2, 4}, {5}});
  EXPECT_DOUBLE_EQ(u(0.5, 0.25), 2 * 0.5 + 3 * 0.25 + 4 * 0.125 + 5 * 0.25);
  EXPECT_DOUBLE_EQ(synergy(u, {0.5, 0.25}), 0.5);
}

TEST(ValidateAssumptionsTest, Examples) {
  EXPECT_TRUE(validate_assumptions(UtilitySpec::additive_synergy(0.3)).ok());
  EXPECT_TRUE(validate_assumptions(UtilitySpec::additive_synergy(0.0)).ok());
  EXPECT_TRUE(validate_assumptions(UtilitySpec::multiplicative()).ok());

  const auto report = validate_assumptions(UtilitySpec::additive_synergy(-0.5));
  ASSERT_TRUE(report.violates(Assumption::kA2));
  for (const auto& v : report.violations) {
    if (v.assumption == Assumption::kA2) {
      EXPECT_DOUBLE_EQ(v.lhs, -0.5);
    }
  }
  EXPECT_THROW(validate_assumptions(UtilitySpec::multiplicative(), 1), std::invalid_argument);
}

TEST(ValidateAssumptionsTest, DetectsEachAssumption) {
  // u(0,0) = 1.
  const UtilitySpec shifted([](double a, double b) { return 1 + a + b; }, "shifted");
  EXPECT_TRUE(validate_assumptions(shifted, 5).violates(Assumption::kNormalization));
  // Decreasing in x1.
  const UtilitySpec decreasing([](double a, double b) { return b - a; }, "decreasing");
  EXPECT_TRUE(validate_assumptions(decreasing, 5).violates(Assumption::kA1));
  // Synergy 3 x1 x2 - 2.5 x1^2 x2^2 falls near (1,1) while staying >= 0.
  const auto falling = UtilitySpec::polynomial({{0, 1}, {1, 3}, {0, 0, -2.5}});
  const auto r = validate_assumptions(falling, 11);
  EXPECT_TRUE(r.violates(Assumption::kA3));
  EXPECT_FALSE(r.violates(Assumption::kA2));
}

TEST(ValidateAssumptionsTest, ValidSpecsHaveMonotoneNonnegativeSynergy) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto u = oracle::random_valid_spec(rng);
    ASSERT_TRUE(validate_assumptions(u, 21).ok()) << u.description();
    for (int a = 0; a <= 20; ++a) {
      for (int b = 0; b <= 20; ++b) {
        const TypePoint x{a / 20.0, b / 20.0};
        EXPECT_GE(synergy(u, x), -kTolerance);
        if (a < 20) {
          EXPECT_GE(synergy(u, {x.x1 + 0.05, x.x2}), synergy(u, x) - kTolerance);
        }
        if (b < 20) {
          EXPECT_GE(synergy(u, {x.x1, x.x2 + 0.05}), synergy(u, x) - kTolerance);
        }
      }
    }
  }
}

TEST(AllocateTest, Examples) {
  // n = 4 ticks: 0.5 = 2, 0.25 = 1.
  for (TieCoin c1 : oracle::kCoins) {
    for (TieCoin c2 : oracle::kCoins) {
      EXPECT_EQ(allocate({2, 2}, {1, 1}, c1, c2), (Allocation{true, true}));
      EXPECT_EQ(allocate({1, 2}, {2, 1}, c1, c2), (Allocation{false, true}));
    }
  }
  EXPECT_EQ(allocate({2, 2}, {2, 2}, TieCoin::kFavorsI, TieCoin::kFavorsJ),
            (Allocation{true, false}));
}

TEST(AllocateTest, OpponentViewIsComplement) {
  const BidGrid g = BidGrid::from_ticks(1, 2);
  for (int a = 0; a < g.num_pairs(); ++a) {
    for (int c = 0; c < g.num_pairs(); ++c) {
      for (TieCoin c1 : oracle::kCoins) {
        for (TieCoin c2 : oracle::kCoins) {
          auto flip = [](TieCoin t) {
            return t == TieCoin::kFavorsI ? TieCoin::kFavorsJ : TieCoin::kFavorsI;
          };
          const Allocation mine = allocate(g.pair_at(a), g.pair_at(c), c1, c2);
          const Allocation theirs = allocate(g.pair_at(c), g.pair_at(a), flip(c1), flip(c2));
          EXPECT_NE(mine.won1, theirs.won1);
          EXPECT_NE(mine.won2, theirs.won2);
        }
      }
    }
  }
}

TEST(ExPostUtilityTest, Examples) {
  const auto u = UtilitySpec::additive_synergy(0.3);
  const BidGrid g = BidGrid::from_ticks(10, 23);
  EXPECT_NEAR(ex_post_utility({true, true}, {2, 2}, {0.5, 0.5}, u, g), 0.9, 1e-15);
  EXPECT_EQ(ex_post_utility({false, false}, {2, 8}, {0.5, 0.9}, u, g), 0.0);
  EXPECT_NEAR(ex_post_utility({true, false}, {2, 8}, {0.5, 0.9}, u, g), 0.3, 1e-15);
  EXPECT_NEAR(ex_post_utility({false, true}, {2, 8}, {0.5, 0.9}, u, g), 0.1, 1e-15);
}

TEST(ExPostUtilityTest, NothingWonIsZero) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const BidGrid g = BidGrid::from_ticks(4, 8);
  for (int trial = 0; trial < 200; ++trial) {
    const auto u = oracle::random_valid_spec(rng);
    const BidPair b = g.pair_at(static_cast<int>(unit(rng) * g.num_pairs()) % g.num_pairs());
    EXPECT_EQ(ex_post_utility({false, false}, b, {unit(rng), unit(rng)}, u, g), 0.0);
  }
}

TEST(QBothTest, Examples) {
  EXPECT_EQ(q_both({2, 2}, {1, 1}), 1.0);
  EXPECT_EQ(q_both({2, 2}, {2, 2}), 0.25);
  EXPECT_EQ(q_both({2, 1}, {1, 2}), 0.0);
  EXPECT_EQ(q_both({2, 1}, {1, 1}), 0.5);
  EXPECT_EQ(q_both({1, 2}, {1, 1}), 0.5);
}

TEST(QBothTest, MatchesCoinEnumerationExhaustively) {
  const BidGrid g = BidGrid::from_ticks(2, 3);
  for (int a = 0; a < g.num_pairs(); ++a) {
    for (int c = 0; c < g.num_pairs(); ++c) {
      const BidPair bi = g.pair_at(a), bj = g.pair_at(c);
      int both = 0;
      for (TieCoin c1 : oracle::kCoins) {
        for (TieCoin c2 : oracle::kCoins) {
          const Allocation al = allocate(bi, bj, c1, c2);
          both += al.won1 && al.won2;
        }
      }
      EXPECT_EQ(q_both(bi, bj), both / 4.0);
      EXPECT_LE(q_both(bi, bj) + q_both(bj, bi), 1.0);
    }
    EXPECT_EQ(q_both(g.pair_at(a), g.pair_at(a)), 0.25);
  }
}

}  // namespace
}  // namespace simauc
