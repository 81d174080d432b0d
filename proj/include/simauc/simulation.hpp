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

#pragma once

// Monte Carlo play of the auction under a fixed strategy profile.
//
// Draws are split into fixed-size blocks, each with its own seed derived from
// the scenario seed, so results do not depend on how many worker threads run
// the blocks (SIMAUC_WORKERS, default 1).

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "simauc/model.hpp"
#include "simauc/solver.hpp"
#include "simauc/strategy.hpp"

namespace simauc {

enum Outcome : int { kBoth = 0, kOnly1 = 1, kOnly2 = 2, kNeither = 3 };

struct SimStats {
  std::uint64_t draws = 0;
  std::array<std::array<std::uint64_t, 4>, 2> outcomes{};  // [bidder][Outcome]
  double mean_revenue = 0.0;       // winning payments per auction pair
  double mean_total_value = 0.0;   // realized u summed over bidders
  double mean_total_payoff = 0.0;  // realized ex-post utility summed over bidders
  double efficiency = 0.0;         // sum realized u / sum max attainable u

  double frequency(int bidder, Outcome o) const {
    return draws ? static_cast<double>(outcomes[bidder][o]) / draws : 0.0;
  }
};

inline int default_workers() {
  if (const char* env = std::getenv("SIMAUC_WORKERS")) {
    const int w = std::atoi(env);
    if (w >= 1) return w;
  }
  return 1;
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

struct BlockTotals {
  std::array<std::array<std::uint64_t, 4>, 2> outcomes{};
  double revenue = 0.0;
  double value = 0.0;
  double payoff = 0.0;
  double max_value = 0.0;
};

inline Outcome classify(const Allocation& a) {
  if (a.won1 && a.won2) return kBoth;
  if (a.won1) return kOnly1;
  if (a.won2) return kOnly2;
  return kNeither;
}

}  // namespace detail

inline constexpr std::uint64_t kSimulationBlock = 1 << 14;

inline SimStats run_simulation(const Environment& env, const Strategy& s1,
                               const Strategy& s2, std::uint64_t draws,
                               std::uint64_t seed, int workers = default_workers()) {
  if (draws < 1) throw std::invalid_argument("draws must be >= 1");
  const TypeGrid& types = env.types();
  const UtilitySpec& u = env.utility();
  const BidGrid& bids = env.bids();
  const int m = types.resolution();
  if (s1.resolution() != m || s2.resolution() != m) {
    throw std::invalid_argument("strategies do not match the type grid");
  }
  std::vector<double> cumulative(m);
  {
    CompensatedSum acc;
    for (int k = 0; k < m; ++k) {
      acc.add(types.marginal_weights()[k]);
      cumulative[k] = acc.value();
    }
  }

  const std::uint64_t blocks = (draws + kSimulationBlock - 1) / kSimulationBlock;
  std::vector<detail::BlockTotals> totals(blocks);

  auto run_block = [&](std::uint64_t block) {
    std::mt19937_64 rng(detail::splitmix64(seed ^ detail::splitmix64(block)));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::bernoulli_distribution coin(0.5);
    auto draw_index = [&]() {
      const double r = unit(rng);
      const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
      return std::min<int>(static_cast<int>(it - cumulative.begin()), m - 1);
    };
    detail::BlockTotals t;
    const std::uint64_t begin = block * kSimulationBlock;
    const std::uint64_t end = std::min(draws, begin + kSimulationBlock);
    for (std::uint64_t d = begin; d < end; ++d) {
      const int t1 = types.index(draw_index(), draw_index());
      const int t2 = types.index(draw_index(), draw_index());
      const TypePoint x1 = types.point(t1);
      const TypePoint x2 = types.point(t2);
      const BidPair& bid1 = s1[t1];
      const BidPair& bid2 = s2[t2];
      const TieCoin c1 = coin(rng) ? TieCoin::kFavorsI : TieCoin::kFavorsJ;
      const TieCoin c2 = coin(rng) ? TieCoin::kFavorsI : TieCoin::kFavorsJ;
      const Allocation a1 = allocate(bid1, bid2, c1, c2);
      const Allocation a2{!a1.won1, !a1.won2};
      ++t.outcomes[0][detail::classify(a1)];
      ++t.outcomes[1][detail::classify(a2)];

      auto realized = [&](const Allocation& a, const TypePoint& x) {
        return u(a.won1 ? x.x1 : 0.0, a.won2 ? x.x2 : 0.0);
      };
      auto paid = [&](const Allocation& a, const BidPair& b) {
        return (a.won1 ? bids.level(b.b1) : 0.0) + (a.won2 ? bids.level(b.b2) : 0.0);
      };
      const double revenue = paid(a1, bid1) + paid(a2, bid2);
      const double value = realized(a1, x1) + realized(a2, x2);
      t.revenue += revenue;
      t.value += value;
      t.payoff += ex_post_utility(a1, bid1, x1, u, bids) +
                  ex_post_utility(a2, bid2, x2, u, bids);
      t.max_value += std::max({u(x1.x1, x1.x2), u(x2.x1, x2.x2),
                               u(x1.x1, 0.0) + u(0.0, x2.x2),
                               u(x2.x1, 0.0) + u(0.0, x1.x2)});
    }
    totals[block] = t;
  };

  const int threads = std::max(1, std::min<int>(workers, static_cast<int>(blocks)));
  if (threads == 1) {
    for (std::uint64_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::uint64_t b = next++; b < blocks; b = next++) run_block(b);
      });
    }
    for (auto& th : pool) th.join();
  }

  SimStats s;
  s.draws = draws;
  CompensatedSum revenue, value, payoff, max_value;
  for (const auto& t : totals) {
    for (int i = 0; i < 2; ++i) {
      for (int o = 0; o < 4; ++o) s.outcomes[i][o] += t.outcomes[i][o];
    }
    revenue.add(t.revenue);
    value.add(t.value);
    payoff.add(t.payoff);
    max_value.add(t.max_value);
  }
  s.mean_revenue = revenue.value() / draws;
  s.mean_total_value = value.value() / draws;
  s.mean_total_payoff = payoff.value() / draws;
  s.efficiency = max_value.value() > 0.0 ? value.value() / max_value.value() : 1.0;
  return s;
}

inline void write_stats_csv(std::ostream& os, const SimStats& s) {
  static const char* kOutcome[4] = {"both", "only1", "only2", "neither"};
  os << "metric,value\n";
  os << "draws," << s.draws << '\n';
  for (int i = 0; i < 2; ++i) {
    for (int o = 0; o < 4; ++o) {
      os << "bidder" << i + 1 << "_" << kOutcome[o] << ','
         << format_double(s.frequency(i, static_cast<Outcome>(o))) << '\n';
    }
  }
  os << "mean_revenue," << format_double(s.mean_revenue) << '\n';
  os << "mean_total_value," << format_double(s.mean_total_value) << '\n';
  os << "mean_total_payoff," << format_double(s.mean_total_payoff) << '\n';
  os << "efficiency," << format_double(s.efficiency) << '\n';
}

}  // namespace simauc
