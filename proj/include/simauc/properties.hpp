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

// Numerical checks of the order properties of the interim utility:
//
//  * weak single crossing: for b <= b' and x <= x',
//      V(b',x) >= V(b,x)  implies  V(b',x') >= V(b,x');
//  * weak quasi-supermodularity: for all b, b' and x,
//      V(b,x) >= V(b^b',x)  implies  V(bvb',x) >= V(b',x);
//  * the increasing-differences inequality of q3 in the two bids,
//      [q3(h,h) - q3(h,l)] - [q3(l,h) - q3(l,l)] >= 0.
//
// plus the exhaustive H/D case table behind the last inequality, where H and
// D are the changes of the ex-post both-win probability q_both when the
// second bid is raised from b2l to b2h, holding the first bid high (H) or
// low (D).

#include <algorithm>
#include <array>
#include <climits>
#include <cstdint>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "simauc/distribution.hpp"
#include "simauc/interim.hpp"
#include "simauc/model.hpp"
#include "simauc/solver.hpp"
#include "simauc/strategy.hpp"

namespace simauc {

enum class Property { kWeakSingleCrossing, kWeakQuasiSupermodularity, kInequalityW };

inline const char* to_string(Property p) {
  switch (p) {
    case Property::kWeakSingleCrossing: return "WSC";
    case Property::kWeakQuasiSupermodularity: return "WQS";
    case Property::kInequalityW: return "IneqW";
  }
  return "?";
}

// One failed implication with everything needed to replay it.
//
//   WSC:   b <= b', x = type_index <= x' = type_index_prime,
//          values = {V(b',x), V(b,x), V(b',x'), V(b,x')}
//   WQS:   b, b' arbitrary, x = type_index,
//          values = {V(b,x), V(b^b',x), V(bvb',x), V(b',x)}
//   IneqW: b = (b1l, b2l), b' = (b1h, b2h),
//          values = {q3(b1h,b2h), q3(b1h,b2l), q3(b1l,b2h), q3(b1l,b2l)}
struct ViolationReport {
  Property property = Property::kWeakSingleCrossing;
  BidPair b;
  BidPair b_prime;
  int type_index = -1;
  int type_index_prime = -1;
  std::optional<std::uint64_t> seed;  // opponent strategy seed, when sampled
  std::array<double, 4> values{};
};

struct PropertyCheck {
  std::uint64_t violations = 0;
  std::vector<ViolationReport> witnesses;  // first max_witnesses violations

  bool ok() const { return violations == 0; }
};

namespace detail {

// V[type][bid index] for one opponent distribution.
inline std::vector<double> value_table(const Environment& env, const InterimTable& t) {
  const BidGrid& g = env.bids();
  std::vector<double> v(static_cast<std::size_t>(env.types().size()) * g.num_pairs());
  for (int k = 0; k < env.types().size(); ++k) {
    for (int idx = 0; idx < g.num_pairs(); ++idx) {
      v[static_cast<std::size_t>(k) * g.num_pairs() + idx] =
          t.value(g.pair_at(idx), env.values(k));
    }
  }
  return v;
}

inline void record(PropertyCheck& out, std::size_t max_witnesses,
                   ViolationReport report) {
  ++out.violations;
  if (out.witnesses.size() < max_witnesses) out.witnesses.push_back(report);
}

}  // namespace detail

inline PropertyCheck check_wsc(const Environment& env, const BidDistribution& mu,
                               std::size_t max_witnesses = SIZE_MAX) {
  const InterimTable table(mu);
  const BidGrid& g = env.bids();
  const int pairs = g.num_pairs();
  const std::vector<double> v = detail::value_table(env, table);
  auto at = [&](int type, int bid) {
    return v[static_cast<std::size_t>(type) * pairs + bid];
  };

  std::vector<std::pair<int, int>> bid_pairs;  // (b, b') with b <= b'
  for (int lo = 0; lo < pairs; ++lo) {
    for (int hi = 0; hi < pairs; ++hi) {
      if (dominates(g.pair_at(hi), g.pair_at(lo))) bid_pairs.emplace_back(lo, hi);
    }
  }
  const int m = env.types().resolution();
  PropertyCheck out;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const int x = i * m + j;
      for (int ip = i; ip < m; ++ip) {
        for (int jp = j; jp < m; ++jp) {
          const int xp = ip * m + jp;
          for (const auto& [lo, hi] : bid_pairs) {
            if (at(x, hi) >= at(x, lo) && at(xp, hi) < at(xp, lo) - kTolerance) {
              detail::record(out, max_witnesses,
                             {Property::kWeakSingleCrossing,
                              g.pair_at(lo),
                              g.pair_at(hi),
                              x,
                              xp,
                              std::nullopt,
                              {at(x, hi), at(x, lo), at(xp, hi), at(xp, lo)}});
            }
          }
        }
      }
    }
  }
  return out;
}

inline PropertyCheck check_wqs(const Environment& env, const BidDistribution& mu,
                               std::size_t max_witnesses = SIZE_MAX) {
  const InterimTable table(mu);
  const BidGrid& g = env.bids();
  const int pairs = g.num_pairs();
  const std::vector<double> v = detail::value_table(env, table);
  PropertyCheck out;
  for (int x = 0; x < env.types().size(); ++x) {
    const double* row = &v[static_cast<std::size_t>(x) * pairs];
    for (int a = 0; a < pairs; ++a) {
      const BidPair b = g.pair_at(a);
      for (int c = 0; c < pairs; ++c) {
        const BidPair bp = g.pair_at(c);
        const double v_meet = row[g.index_of(meet(b, bp))];
        const double v_join = row[g.index_of(join(b, bp))];
        if (row[a] >= v_meet && v_join < row[c] - kTolerance) {
          detail::record(out, max_witnesses,
                         {Property::kWeakQuasiSupermodularity, b, bp, x, -1,
                          std::nullopt, {row[a], v_meet, v_join, row[c]}});
        }
      }
    }
  }
  return out;
}

inline PropertyCheck check_ineq_w(const BidDistribution& mu,
                                  std::size_t max_witnesses = SIZE_MAX) {
  const InterimTable table(mu);
  const int levels = mu.grid().num_levels();
  PropertyCheck out;
  for (int b1l = 0; b1l < levels; ++b1l) {
    for (int b1h = b1l + 1; b1h < levels; ++b1h) {
      for (int b2l = 0; b2l < levels; ++b2l) {
        for (int b2h = b2l + 1; b2h < levels; ++b2h) {
          const std::array<double, 4> q{table.q3({b1h, b2h}), table.q3({b1h, b2l}),
                                        table.q3({b1l, b2h}), table.q3({b1l, b2l})};
          if ((q[0] - q[1]) - (q[2] - q[3]) < -kTolerance) {
            detail::record(out, max_witnesses,
                           {Property::kInequalityW, {b1l, b2l}, {b1h, b2h}, -1, -1,
                            std::nullopt, q});
          }
        }
      }
    }
  }
  return out;
}

// Recomputes a report's values from scratch through interim_utility / q3.
inline std::array<double, 4> replay(const ViolationReport& r, const Environment& env,
                                    const BidDistribution& mu) {
  const UtilitySpec& u = env.utility();
  auto V = [&](const BidPair& b, int type) {
    return interim_utility(b, env.types().point(type), mu, u);
  };
  switch (r.property) {
    case Property::kWeakSingleCrossing:
      return {V(r.b_prime, r.type_index), V(r.b, r.type_index),
              V(r.b_prime, r.type_index_prime), V(r.b, r.type_index_prime)};
    case Property::kWeakQuasiSupermodularity:
      return {V(r.b, r.type_index), V(meet(r.b, r.b_prime), r.type_index),
              V(join(r.b, r.b_prime), r.type_index), V(r.b_prime, r.type_index)};
    case Property::kInequalityW:
      return {q3(mu, r.b_prime), q3(mu, {r.b_prime.b1, r.b.b2}),
              q3(mu, {r.b.b1, r.b_prime.b2}), q3(mu, r.b)};
  }
  return {};
}

// Seed of the k-th opponent strategy in a sweep.
inline std::uint64_t sweep_seed(std::uint64_t base, int k) {
  return base + static_cast<std::uint64_t>(k);
}

struct SweepResult {
  int samples = 0;
  std::uint64_t base_seed = 0;
  PropertyCheck wsc;
  PropertyCheck wqs;
  PropertyCheck ineq_w;

  bool ok() const { return wsc.ok() && wqs.ok() && ineq_w.ok(); }
};

// Runs all three checks against `samples` random monotone opponent
// strategies drawn with seeds base_seed, base_seed + 1, ...
inline SweepResult sweep_properties(const Environment& env, int samples,
                                    std::uint64_t base_seed,
                                    std::size_t max_witnesses = 20) {
  SweepResult out;
  out.samples = samples;
  out.base_seed = base_seed;
  auto merge = [&](PropertyCheck& into, PropertyCheck part, std::uint64_t seed) {
    into.violations += part.violations;
    for (auto& w : part.witnesses) {
      if (into.witnesses.size() >= max_witnesses) break;
      w.seed = seed;
      into.witnesses.push_back(w);
    }
  };
  for (int k = 0; k < samples; ++k) {
    const std::uint64_t seed = sweep_seed(base_seed, k);
    const Strategy s = random_monotone(env.types(), env.bids(), seed);
    const BidDistribution mu = env.induced(s);
    merge(out.wsc, check_wsc(env, mu, max_witnesses), seed);
    merge(out.wqs, check_wqs(env, mu, max_witnesses), seed);
    merge(out.ineq_w, check_ineq_w(mu, max_witnesses), seed);
  }
  return out;
}

// ---------------------------------------------------------------------------
// H/D case table.

// Position of a bid relative to the opponent's bid on object 1:
// 1 below, 2 equal, 3 above.
inline int first_bid_case(int bid, int beta1) {
  return bid < beta1 ? 1 : (bid == beta1 ? 2 : 3);
}

// Main category from the second bids:
//   1: b2h > beta2 > b2l      2: b2h > beta2 = b2l     3: b2h > b2l > beta2
//   4: b2h = beta2 > b2l      5: beta2 > b2h > b2l
inline int second_bid_category(int b2h, int b2l, int beta2) {
  if (beta2 < b2l) return 3;
  if (beta2 == b2l) return 2;
  if (beta2 < b2h) return 1;
  if (beta2 == b2h) return 4;
  return 5;
}

struct HDRecord {
  int main_category = 0;  // 1..5
  int h_sub = 0;          // 1..3, b1h against beta1
  int d_sub = 0;          // 1..3, b1l against beta1
  int h_quarters = 0;
  int d_quarters = 0;

  Rational h() const { return Rational(h_quarters, 4); }
  Rational d() const { return Rational(d_quarters, 4); }
  int difference_quarters() const { return h_quarters - d_quarters; }
};

inline HDRecord hd_table(int b1h, int b1l, int b2h, int b2l, const BidPair& beta) {
  if (!(b1h > b1l) || !(b2h > b2l)) {
    throw std::invalid_argument("hd_table requires b1h > b1l and b2h > b2l");
  }
  HDRecord r;
  r.main_category = second_bid_category(b2h, b2l, beta.b2);
  r.h_sub = first_bid_case(b1h, beta.b1);
  r.d_sub = first_bid_case(b1l, beta.b1);
  r.h_quarters = q_both_quarters({b1h, b2h}, beta) - q_both_quarters({b1h, b2l}, beta);
  r.d_quarters = q_both_quarters({b1l, b2h}, beta) - q_both_quarters({b1l, b2l}, beta);
  return r;
}

// A cell (d_sub, h_sub) of the table is defined unless b1l would sit at or
// above beta1 while b1h sits at or below it.
inline bool hd_cell_defined(int d_sub, int h_sub) { return d_sub == 1 || h_sub == 3; }

struct HDCell {
  std::uint64_t count = 0;
  int min_difference = INT_MAX;  // quarters
  int max_difference = INT_MIN;
};

struct HDSummary {
  std::uint64_t quintuples = 0;
  std::uint64_t negative = 0;
  // [category-1][d_sub-1][h_sub-1]
  std::array<std::array<std::array<HDCell, 3>, 3>, 5> cells{};
  // Distinct H values seen per (category, h_sub) and D values per
  // (category, d_sub), in quarters.
  std::array<std::array<std::set<int>, 3>, 5> h_values{};
  std::array<std::array<std::set<int>, 3>, 5> d_values{};
  std::uint64_t undefined_hits = 0;

  bool ok() const { return negative == 0 && undefined_hits == 0; }
};

// Every (b1h > b1l, b2h > b2l, beta) on the lattice.
inline HDSummary hd_full_enumeration(const BidGrid& bids) {
  HDSummary s;
  const int levels = bids.num_levels();
  for (int b1l = 0; b1l < levels; ++b1l) {
    for (int b1h = b1l + 1; b1h < levels; ++b1h) {
      for (int b2l = 0; b2l < levels; ++b2l) {
        for (int b2h = b2l + 1; b2h < levels; ++b2h) {
          for (int beta1 = 0; beta1 < levels; ++beta1) {
            for (int beta2 = 0; beta2 < levels; ++beta2) {
              const HDRecord r = hd_table(b1h, b1l, b2h, b2l, {beta1, beta2});
              const int c = r.main_category - 1;
              ++s.quintuples;
              if (r.difference_quarters() < 0) ++s.negative;
              if (!hd_cell_defined(r.d_sub, r.h_sub)) ++s.undefined_hits;
              HDCell& cell = s.cells[c][r.d_sub - 1][r.h_sub - 1];
              ++cell.count;
              cell.min_difference = std::min(cell.min_difference, r.difference_quarters());
              cell.max_difference = std::max(cell.max_difference, r.difference_quarters());
              s.h_values[c][r.h_sub - 1].insert(r.h_quarters);
              s.d_values[c][r.d_sub - 1].insert(r.d_quarters);
            }
          }
        }
      }
    }
  }
  return s;
}

inline std::string quarters_str(int q) { return Rational(q, 4).str(); }

namespace detail {
inline std::string value_set_str(const std::set<int>& values) {
  if (values.empty()) return "";
  std::string out;
  for (int v : values) out += (out.empty() ? "" : "|") + quarters_str(v);
  return out;
}
}  // namespace detail

// One row per (category, d_sub, h_sub) cell.
inline void write_hd_csv(std::ostream& os, const HDSummary& s) {
  os << "category,d_case,h_case,defined,count,h_value,d_value,h_minus_d_min,"
        "h_minus_d_max\n";
  for (int c = 0; c < 5; ++c) {
    for (int d = 0; d < 3; ++d) {
      for (int h = 0; h < 3; ++h) {
        const HDCell& cell = s.cells[c][d][h];
        os << c + 1 << ',' << d + 1 << ',' << h + 1 << ','
           << (hd_cell_defined(d + 1, h + 1) ? 1 : 0) << ',' << cell.count << ','
           << detail::value_set_str(s.h_values[c][h]) << ','
           << detail::value_set_str(s.d_values[c][d]) << ',';
        if (cell.count > 0) {
          os << quarters_str(cell.min_difference) << ','
             << quarters_str(cell.max_difference);
        } else {
          os << ',';
        }
        os << '\n';
      }
    }
  }
}

// Text rendering: per category, rows D1..D3 by columns H1..H3 holding H - D,
// with "X" for undefined cells.
inline std::string render_hd_table(const HDSummary& s) {
  static const char* kCategory[5] = {
      "b2h > beta2 > b2l", "b2h > beta2 = b2l", "b2h > b2l > beta2",
      "b2h = beta2 > b2l", "beta2 > b2h > b2l"};
  std::ostringstream os;
  for (int c = 0; c < 5; ++c) {
    os << "category " << c + 1 << " [" << kCategory[c] << "]  H by case: ";
    for (int k = 0; k < 3; ++k) {
      os << (k ? ", " : "") << detail::value_set_str(s.h_values[c][k]);
    }
    os << "  D by case: ";
    for (int k = 0; k < 3; ++k) {
      os << (k ? ", " : "") << detail::value_set_str(s.d_values[c][k]);
    }
    os << "\n           H1 (b1h<beta1)  H2 (b1h=beta1)  H3 (b1h>beta1)\n";
    for (int d = 0; d < 3; ++d) {
      static const char* kRow[3] = {"D1 (b1l<beta1)", "D2 (b1l=beta1)",
                                    "D3 (b1l>beta1)"};
      os << "  " << kRow[d];
      for (int h = 0; h < 3; ++h) {
        const HDCell& cell = s.cells[c][d][h];
        std::string text;
        if (!hd_cell_defined(d + 1, h + 1)) {
          text = "X";
        } else if (cell.count == 0) {
          text = "-";
        } else if (cell.min_difference == cell.max_difference) {
          text = quarters_str(cell.min_difference);
        } else {
          text = quarters_str(cell.min_difference) + ".." +
                 quarters_str(cell.max_difference);
        }
        os << "  " << text << std::string(14 - std::min<std::size_t>(14, text.size()), ' ');
      }
      os << '\n';
    }
  }
  os << "quintuples=" << s.quintuples << " negative=" << s.negative
     << " undefined_hits=" << s.undefined_hits << '\n';
  return os.str();
}

}  // namespace simauc
