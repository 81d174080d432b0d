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


#include "simauc/strategy.hpp"

#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "oracles.hpp"

namespace simauc {
namespace {

TypeGrid uniform_grid(int m) { return product_grid(discretize(MarginalDist::uniform(), m)); }

TEST(IsMonotoneTest, Examples) {
  EXPECT_TRUE(is_monotone(Strategy::constant(4, {2, 1})).monotone);

  const TypeGrid types = uniform_grid(5);
  const BidGrid bids = BidGrid::from_ticks(4, 4);
  std::vector<BidPair> half(types.size());
  for (int k = 0; k < types.size(); ++k) {
    const TypePoint x = types.point(k);
    half[k] = {bids.floor_tick(x.x1 / 2), bids.floor_tick(x.x2 / 2)};
  }
  const Strategy s(5, half);
  EXPECT_TRUE(is_monotone(s).monotone);
  EXPECT_TRUE(oracle::monotone_all_pairs(s));

  // Swap the bids of (0,0) and (1,0).
  Strategy swapped(2, {{0, 0}, {0, 1}, {1, 1}, {1, 1}});
  std::swap(swapped[0], swapped[2]);
  const auto check = is_monotone(swapped);
  EXPECT_FALSE(check.monotone);
  ASSERT_TRUE(check.witness.has_value());
  EXPECT_EQ(*check.witness, (std::pair<int, int>{0, 2}));
}

TEST(IsMonotoneTest, AgreesWithAllPairsOnEveryAssignment) {
  const BidGrid bids = BidGrid::from_ticks(1, 1);
  int monotone = 0;
  oracle::for_each_assignment(2, bids, [&](const Strategy& s) {
    const bool fast = is_monotone(s).monotone;
    EXPECT_EQ(fast, oracle::monotone_all_pairs(s));
    monotone += fast;
  });
  EXPECT_EQ(monotone, 36);
}

TEST(RandomMonotoneTest, AlwaysMonotoneAndDeterministic) {
  const BidGrid bids = BidGrid::from_ticks(4, 9);
  for (int m : {1, 2, 4, 7}) {
    const TypeGrid types = uniform_grid(m);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const Strategy s = random_monotone(types, bids, seed);
      EXPECT_TRUE(is_monotone(s).monotone);
      EXPECT_TRUE(oracle::monotone_all_pairs(s));
      EXPECT_EQ(s, random_monotone(types, bids, seed));
      for (const auto& b : s.bids()) EXPECT_TRUE(bids.contains(b));
    }
  }
}

// One cell: each of the 9 bid pairs should be equally likely across seeds.
// Chi-square with 8 degrees of freedom; 20.090 is the 1% critical value.
TEST(RandomMonotoneTest, SingleCellIsUniform) {
  const TypeGrid types = uniform_grid(1);
  const BidGrid bids = BidGrid::from_ticks(2, 2);
  constexpr int kSeeds = 10000;
  std::vector<int> counts(bids.num_pairs(), 0);
  for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
    ++counts[bids.index_of(random_monotone(types, bids, seed)[0])];
  }
  const double expected = static_cast<double>(kSeeds) / bids.num_pairs();
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_LT(chi2, 20.090);
}

TEST(EnumerateMonotoneTest, Counts) {
  bool truncated = true;
  const auto one = enumerate_monotone(uniform_grid(1), BidGrid::from_ticks(2, 2), 1000, &truncated);
  EXPECT_EQ(one.size(), 9u);
  EXPECT_FALSE(truncated);

  const auto two = enumerate_monotone(uniform_grid(2), BidGrid::from_ticks(1, 1), 1000, &truncated);
  int brute = 0;
  oracle::for_each_assignment(2, BidGrid::from_ticks(1, 1),
                              [&](const Strategy& s) { brute += oracle::monotone_all_pairs(s); });
  EXPECT_EQ(two.size(), 36u);
  EXPECT_EQ(static_cast<int>(two.size()), brute);
  EXPECT_FALSE(truncated);
}

TEST(EnumerateMonotoneTest, NoDuplicatesLexicographicAndComplete) {
  const TypeGrid types = uniform_grid(2);
  const BidGrid bids = BidGrid::from_ticks(2, 2);
  const auto all = enumerate_monotone(types, bids, 1u << 20);
  std::set<std::vector<int>> seen;
  std::vector<int> prev;
  for (const auto& s : all) {
    EXPECT_TRUE(is_monotone(s).monotone);
    std::vector<int> flat;
    for (const auto& b : s.bids()) {
      flat.push_back(b.b1);
      flat.push_back(b.b2);
    }
    EXPECT_TRUE(seen.insert(flat).second);
    if (!prev.empty()) EXPECT_LT(prev, flat);
    prev = flat;
  }
  int brute = 0;
  oracle::for_each_assignment(2, bids, [&](const Strategy& s) { brute += oracle::monotone_all_pairs(s); });
  EXPECT_EQ(static_cast<int>(all.size()), brute);
}

TEST(EnumerateMonotoneTest, CapSetsTruncationFlag) {
  bool truncated = false;
  const auto some = enumerate_monotone(uniform_grid(2), BidGrid::from_ticks(1, 1), 10, &truncated);
  EXPECT_EQ(some.size(), 10u);
  EXPECT_TRUE(truncated);
  const auto exact = enumerate_monotone(uniform_grid(2), BidGrid::from_ticks(1, 1), 36, &truncated);
  EXPECT_EQ(exact.size(), 36u);
  EXPECT_FALSE(truncated);
}

TEST(StrategyCsvTest, RoundTripIsBitExact) {
  const TypeGrid types = uniform_grid(4);
  const BidGrid bids(10, Rational(23, 10));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Strategy s = random_monotone(types, bids, seed);
    std::ostringstream os;
    write_strategy_csv(os, s, bids);
    std::istringstream is(os.str());
    const Strategy back = read_strategy_csv(is, 4, bids);
    EXPECT_EQ(back, s);
    std::ostringstream again;
    write_strategy_csv(again, back, bids);
    EXPECT_EQ(again.str(), os.str());
  }
}

TEST(StrategyCsvTest, RejectsMalformedInput) {
  const BidGrid bids = BidGrid::from_ticks(4, 4);
  std::istringstream no_header("0,0,0,0\n");
  EXPECT_THROW(read_strategy_csv(no_header, 1, bids), std::invalid_argument);
  std::istringstream off_grid("x1_index,x2_index,b1,b2\n0,0,0.3,0\n");
  EXPECT_THROW(read_strategy_csv(off_grid, 1, bids), std::invalid_argument);
  std::istringstream missing("x1_index,x2_index,b1,b2\n0,0,0.25,0\n");
  EXPECT_THROW(read_strategy_csv(missing, 2, bids), std::invalid_argument);
}

TEST(StarterStrategiesTest, AreMonotone) {
  const TypeGrid types = uniform_grid(6);
  const auto u = UtilitySpec::additive_synergy(0.3);
  const BidGrid bids(4, Rational(9, 4));
  EXPECT_TRUE(is_monotone(half_value_strategy(types, bids, u)).monotone);
  EXPECT_TRUE(is_monotone(truthful_strategy(types, bids, u)).monotone);
}

}  // namespace
}  // namespace simauc
