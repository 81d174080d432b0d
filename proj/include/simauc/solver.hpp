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

// Best responses and monotone pure-strategy equilibria on a discretized
// instance.
//
// Payoff comparisons treat values within kTolerance of each other as equal:
// best_response_set() is the set of bids within kTolerance of the maximum,
// and a deviation gaining no more than kTolerance counts as zero regret.
// Selection takes the coordinatewise-greatest element of that set. Under
// A1-A3 the set is a sublattice and the greatest selection is monotone in
// the type; both facts are checked at runtime and surface as SelectionError.

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "simauc/distribution.hpp"
#include "simauc/interim.hpp"
#include "simauc/model.hpp"
#include "simauc/strategy.hpp"

namespace simauc {

// One discretized instance: shared type grid, valuation and bid lattice.
class Environment {
 public:
  Environment(TypeGrid types, UtilitySpec utility, BidGrid bids)
      : types_(std::move(types)), utility_(std::move(utility)), bids_(std::move(bids)) {
    values_.reserve(types_.size());
    for (int k = 0; k < types_.size(); ++k) {
      values_.push_back(evaluate(utility_, types_.point(k)));
    }
  }

  const TypeGrid& types() const { return types_; }
  const UtilitySpec& utility() const { return utility_; }
  const BidGrid& bids() const { return bids_; }
  const TypeValues& values(int type_index) const { return values_[type_index]; }

  BidDistribution induced(const Strategy& s) const {
    return induced_bid_distribution(s, types_, bids_);
  }

 private:
  TypeGrid types_;
  UtilitySpec utility_;
  BidGrid bids_;
  std::vector<TypeValues> values_;
};

class SelectionError : public std::runtime_error {
 public:
  enum class Kind { kNoGreatestElement, kMonotonicityBroken };

  SelectionError(Kind kind, int type_index, const std::string& what)
      : std::runtime_error(what), kind_(kind), type_index_(type_index) {}

  Kind kind() const { return kind_; }
  int type_index() const { return type_index_; }

 private:
  Kind kind_;
  int type_index_;
};

inline std::vector<BidPair> best_response_set(const TypeValues& v,
                                              const InterimTable& table) {
  const BidGrid& g = table.grid();
  std::vector<double> value(g.num_pairs());
  double best = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < g.num_pairs(); ++k) {
    value[k] = table.value(g.pair_at(k), v);
    best = std::max(best, value[k]);
  }
  std::vector<BidPair> out;
  for (int k = 0; k < g.num_pairs(); ++k) {
    if (value[k] >= best - kTolerance) out.push_back(g.pair_at(k));
  }
  return out;
}

inline std::vector<BidPair> best_response_set(const TypePoint& x,
                                              const BidDistribution& mu,
                                              const UtilitySpec& spec) {
  return best_response_set(evaluate(spec, x), InterimTable(mu));
}

// Greatest element of a set of bid pairs under the coordinatewise order, if
// it exists.
inline std::optional<BidPair> greatest_element(const std::vector<BidPair>& set) {
  if (set.empty()) return std::nullopt;
  BidPair top = set.front();
  for (const auto& b : set) top = join(top, b);
  if (std::find(set.begin(), set.end(), top) == set.end()) return std::nullopt;
  return top;
}

inline Strategy monotone_best_reply(const Strategy& opponent, const Environment& env) {
  if (!is_monotone(opponent)) {
    throw std::invalid_argument("opponent strategy is not monotone");
  }
  const InterimTable table(env.induced(opponent));
  std::vector<BidPair> reply(env.types().size());
  for (int k = 0; k < env.types().size(); ++k) {
    const auto set = best_response_set(env.values(k), table);
    const auto top = greatest_element(set);
    if (!top) {
      throw SelectionError(SelectionError::Kind::kNoGreatestElement, k,
                           "best-response set at type " + std::to_string(k) +
                               " has no greatest element");
    }
    reply[k] = *top;
  }
  Strategy out(env.types().resolution(), std::move(reply));
  if (const auto check = is_monotone(out); !check) {
    throw SelectionError(SelectionError::Kind::kMonotonicityBroken,
                         check.witness->second,
                         "greatest best reply is not monotone between types " +
                             std::to_string(check.witness->first) + " and " +
                             std::to_string(check.witness->second));
  }
  return out;
}

struct TypeRegret {
  double regret = 0.0;
  BidPair best_deviation;
};

struct EquilibriumCheck {
  double max_regret = 0.0;
  std::array<std::vector<TypeRegret>, 2> per_type;
};

// Regret of each type's bid against every lattice deviation. Gains of at
// most kTolerance are reported as 0.
inline std::vector<TypeRegret> type_regrets(const Strategy& own,
                                            const Strategy& opponent,
                                            const Environment& env) {
  const InterimTable table(env.induced(opponent));
  const BidGrid& g = env.bids();
  std::vector<TypeRegret> out(env.types().size());
  for (int k = 0; k < env.types().size(); ++k) {
    const TypeValues& v = env.values(k);
    double best = -std::numeric_limits<double>::infinity();
    BidPair arg;
    for (int idx = 0; idx < g.num_pairs(); ++idx) {
      const BidPair b = g.pair_at(idx);
      const double value = table.value(b, v);
      if (value > best) {
        best = value;
        arg = b;
      }
    }
    const double gain = best - table.value(own[k], v);
    out[k] = {gain > kTolerance ? gain : 0.0, gain > kTolerance ? arg : own[k]};
  }
  return out;
}

inline EquilibriumCheck check_equilibrium(const Strategy& s1, const Strategy& s2,
                                          const Environment& env) {
  EquilibriumCheck check;
  check.per_type[0] = type_regrets(s1, s2, env);
  check.per_type[1] = type_regrets(s2, s1, env);
  for (const auto& bidder : check.per_type) {
    for (const auto& r : bidder) check.max_regret = std::max(check.max_regret, r.regret);
  }
  return check;
}

struct SolveStatus {
  enum class Kind { kExactEquilibrium, kEpsilonEquilibrium, kCycleDetected };
  Kind kind = Kind::kEpsilonEquilibrium;
  double epsilon = 0.0;
  int period = 0;
};

inline const char* to_string(SolveStatus::Kind k) {
  switch (k) {
    case SolveStatus::Kind::kExactEquilibrium: return "exact_equilibrium";
    case SolveStatus::Kind::kEpsilonEquilibrium: return "epsilon_equilibrium";
    case SolveStatus::Kind::kCycleDetected: return "cycle_detected";
  }
  return "?";
}

struct SolveResult {
  Strategy s1;
  Strategy s2;
  SolveStatus status;
  int iterations = 0;
  double max_regret = 0.0;
};

// Alternating (bidder 1 then bidder 2) greatest best replies. Stops at a
// fixed point, when a profile repeats, or after max_iter rounds. On a cycle
// the lowest-regret profile seen so far is returned. `iterations` counts
// rounds that changed the profile.
inline SolveResult iterate_best_response(const Strategy& s1_init,
                                         const Strategy& s2_init,
                                         const Environment& env, int max_iter) {
  if (!is_monotone(s1_init) || !is_monotone(s2_init)) {
    throw std::invalid_argument("initial strategies must be monotone");
  }
  auto finish = [&](Strategy s1, Strategy s2, int iterations, bool fixed_point) {
    SolveResult r;
    r.max_regret = check_equilibrium(s1, s2, env).max_regret;
    r.s1 = std::move(s1);
    r.s2 = std::move(s2);
    r.iterations = iterations;
    const bool exact = fixed_point || r.max_regret == 0.0;
    r.status.kind = exact ? SolveStatus::Kind::kExactEquilibrium
                          : SolveStatus::Kind::kEpsilonEquilibrium;
    r.status.epsilon = r.max_regret;
    return r;
  };

  Strategy s1 = s1_init;
  Strategy s2 = s2_init;
  if (max_iter <= 0) return finish(s1, s2, 0, false);

  auto profile_hash = [](const Strategy& a, const Strategy& b) {
    return a.hash() * 0x9e3779b97f4a7c15ull ^ b.hash();
  };
  std::vector<std::pair<Strategy, Strategy>> history{{s1, s2}};
  std::unordered_multimap<std::uint64_t, int> seen{{profile_hash(s1, s2), 0}};

  for (int round = 1; round <= max_iter; ++round) {
    Strategy n1 = monotone_best_reply(s2, env);
    Strategy n2 = monotone_best_reply(n1, env);
    if (n1 == s1 && n2 == s2) return finish(s1, s2, round - 1, true);
    s1 = std::move(n1);
    s2 = std::move(n2);

    const auto h = profile_hash(s1, s2);
    const auto [lo, hi] = seen.equal_range(h);
    for (auto it = lo; it != hi; ++it) {
      const auto& [p1, p2] = history[it->second];
      if (p1 != s1 || p2 != s2) continue;
      const int start = it->second;
      double best = std::numeric_limits<double>::infinity();
      SolveResult out;
      for (const auto& [h1, h2] : history) {
        const double regret = check_equilibrium(h1, h2, env).max_regret;
        if (regret < best) {
          best = regret;
          out.s1 = h1;
          out.s2 = h2;
        }
      }
      out.max_regret = best;
      out.iterations = round;
      out.status = {SolveStatus::Kind::kCycleDetected, best, round - start};
      return out;
    }
    seen.emplace(h, round);
    history.emplace_back(s1, s2);
  }
  return finish(s1, s2, max_iter, false);
}

struct ExhaustiveResult {
  std::vector<std::pair<Strategy, Strategy>> equilibria;
  std::uint64_t strategies = 0;  // monotone strategies per bidder
  bool truncated = false;
};

// Every profile of monotone strategies with zero regret. Intended for tiny
// instances; `cap` bounds the number of strategies enumerated per bidder.
inline ExhaustiveResult exhaustive_equilibria(const Environment& env, std::uint64_t cap) {
  ExhaustiveResult out;
  const auto all = enumerate_monotone(env.types(), env.bids(), cap, &out.truncated);
  out.strategies = all.size();

  // Per strategy: the opponent's best attainable value at each type.
  struct Response {
    InterimTable table;
    std::vector<double> best;
  };
  std::vector<Response> responses;
  responses.reserve(all.size());
  const BidGrid& g = env.bids();
  for (const auto& s : all) {
    Response r{InterimTable(env.induced(s)), {}};
    r.best.resize(env.types().size());
    for (int k = 0; k < env.types().size(); ++k) {
      double best = -std::numeric_limits<double>::infinity();
      for (int idx = 0; idx < g.num_pairs(); ++idx) {
        best = std::max(best, r.table.value(g.pair_at(idx), env.values(k)));
      }
      r.best[k] = best;
    }
    responses.push_back(std::move(r));
  }
  auto is_reply = [&](const Strategy& own, const Response& against) {
    for (int k = 0; k < env.types().size(); ++k) {
      if (against.best[k] - against.table.value(own[k], env.values(k)) > kTolerance) {
        return false;
      }
    }
    return true;
  };
  for (std::size_t a = 0; a < all.size(); ++a) {
    for (std::size_t b = 0; b < all.size(); ++b) {
      if (is_reply(all[a], responses[b]) && is_reply(all[b], responses[a])) {
        out.equilibria.emplace_back(all[a], all[b]);
      }
    }
  }
  return out;
}

}  // namespace simauc
