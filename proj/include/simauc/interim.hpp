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

// Interim winning probabilities against an opponent bid distribution and the
// resulting interim expected utility.
//
// Exclusive-win probabilities p1, p2, p3 come straight from the region
// masses around the bid; the "at least" probabilities q1, q2 depend on one
// coordinate only and q3 == p3. The utility is available both as
//   p3 [u(x1,x2) - b1 - b2] + p1 [u(x1,0) - b1] + p2 [u(0,x2) - b2]
// and in the separable form
//   q1 [u(x1,0) - b1] + q2 [u(0,x2) - b2] + q3 * synergy(x).

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "simauc/distribution.hpp"
#include "simauc/model.hpp"

namespace simauc {

struct WinProbs {
  double p1 = 0.0;  // object 1 only
  double p2 = 0.0;  // object 2 only
  double p3 = 0.0;  // both
  double q1 = 0.0;  // object 1, at least
  double q2 = 0.0;  // object 2, at least
};

// Thrown when the direct region sums and the q-identities disagree.
class InconsistentRegions : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Nine-cell decomposition from the distribution's cumulative tables. O(1).
inline NineCell regions(const BidDistribution& mu, const BidPair& b) {
  if (!mu.grid().contains(b)) throw std::invalid_argument("bid is off the grid");
  const double ll = mu.lower_left(b.b1, b.b2);
  const double el = mu.lower_left(b.b1 + 1, b.b2) - ll;
  const double le = mu.lower_left(b.b1, b.b2 + 1) - ll;
  const double ee = mu.mass(b);
  const double first_below = mu.first_below(b.b1);
  const double second_below = mu.second_below(b.b2);
  NineCell n;
  n.cell[kBelow][kBelow] = ll;
  n.cell[kEqual][kBelow] = el;
  n.cell[kBelow][kEqual] = le;
  n.cell[kEqual][kEqual] = ee;
  n.cell[kBelow][kAbove] = first_below - ll - le;
  n.cell[kEqual][kAbove] = mu.first_at(b.b1) - el - ee;
  n.cell[kAbove][kBelow] = second_below - ll - el;
  n.cell[kAbove][kEqual] = mu.second_at(b.b2) - le - ee;
  n.cell[kAbove][kAbove] = 1.0 - first_below - mu.first_at(b.b1) -
                           n.cell[kAbove][kBelow] - n.cell[kAbove][kEqual];
  return n;
}

inline double q1(const BidDistribution& mu, int b1) {
  return mu.first_below(b1) + 0.5 * mu.first_at(b1);
}

inline double q2(const BidDistribution& mu, int b2) {
  return mu.second_below(b2) + 0.5 * mu.second_at(b2);
}

inline double q3(const NineCell& n) {
  return n(kBelow, kBelow) + 0.5 * n(kEqual, kBelow) +
         0.5 * n(kBelow, kEqual) + 0.25 * n(kEqual, kEqual);
}

inline double q3(const BidDistribution& mu, const BidPair& b) {
  return q3(regions(mu, b));
}

// All five probabilities. p1 and p2 are computed from their own regions and
// cross-checked against q1 - q3 and q2 - q3.
inline WinProbs win_probs(const BidDistribution& mu, const BidPair& b) {
  const NineCell n = regions(mu, b);
  WinProbs w;
  w.p3 = q3(n);
  w.p1 = n(kBelow, kAbove) + 0.5 * n(kBelow, kEqual) +
         0.5 * n(kEqual, kAbove) + 0.25 * n(kEqual, kEqual);
  w.p2 = n(kAbove, kBelow) + 0.5 * n(kEqual, kBelow) +
         0.5 * n(kAbove, kEqual) + 0.25 * n(kEqual, kEqual);
  w.q1 = q1(mu, b.b1);
  w.q2 = q2(mu, b.b2);
  if (std::abs(w.p1 - (w.q1 - w.p3)) > kTolerance ||
      std::abs(w.p2 - (w.q2 - w.p3)) > kTolerance) {
    throw InconsistentRegions("region sums disagree with q identities at bid (" +
                              std::to_string(b.b1) + "," +
                              std::to_string(b.b2) + ")");
  }
  return w;
}

// Separable form; the one used by every solver and property check.
inline double interim_value(double q1_value, double q2_value, double q3_value,
                            double bid1, double bid2, const TypeValues& v) {
  return q1_value * (v.standalone1 - bid1) + q2_value * (v.standalone2 - bid2) +
         q3_value * v.synergy;
}

inline double interim_utility(const BidPair& b, const TypePoint& x,
                              const BidDistribution& mu,
                              const UtilitySpec& spec) {
  const BidGrid& g = mu.grid();
  return interim_value(q1(mu, b.b1), q2(mu, b.b2), q3(mu, b), g.level(b.b1),
                       g.level(b.b2), evaluate(spec, x));
}

// Exclusive-probability form.
inline double interim_utility_expanded(const BidPair& b, const TypePoint& x,
                                       const BidDistribution& mu,
                                       const UtilitySpec& spec) {
  const WinProbs w = win_probs(mu, b);
  const double bid1 = mu.grid().level(b.b1);
  const double bid2 = mu.grid().level(b.b2);
  return w.p3 * (spec(x.x1, x.x2) - (bid1 + bid2)) +
         w.p1 * (spec(x.x1, 0.0) - bid1) + w.p2 * (spec(0.0, x.x2) - bid2);
}

// q1, q2, q3 tabulated over the whole lattice for one opponent distribution.
// value() reproduces interim_utility bit for bit.
class InterimTable {
 public:
  explicit InterimTable(const BidDistribution& mu) : grid_(mu.grid()) {
    const int levels = grid_.num_levels();
    q1_.resize(levels);
    q2_.resize(levels);
    for (int t = 0; t < levels; ++t) {
      q1_[t] = simauc::q1(mu, t);
      q2_[t] = simauc::q2(mu, t);
    }
    q3_.resize(grid_.num_pairs());
    for (int k = 0; k < grid_.num_pairs(); ++k) {
      q3_[k] = simauc::q3(mu, grid_.pair_at(k));
    }
  }

  const BidGrid& grid() const { return grid_; }
  double q1(int b1) const { return q1_[b1]; }
  double q2(int b2) const { return q2_[b2]; }
  double q3(const BidPair& b) const { return q3_[grid_.index_of(b)]; }

  double value(const BidPair& b, const TypeValues& v) const {
    return interim_value(q1_[b.b1], q2_[b.b2], q3_[grid_.index_of(b)],
                         grid_.level(b.b1), grid_.level(b.b2), v);
  }

 private:
  BidGrid grid_;
  std::vector<double> q1_, q2_, q3_;
};

}  // namespace simauc
