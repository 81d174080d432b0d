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

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "simauc/model.hpp"

namespace simauc {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      carry_ += (sum_ - t) + v;
    } else {
      carry_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

// Atomless marginal distribution of one object's value on [0,1].
class MarginalDist {
 public:
  enum class Kind { kUniform, kPiecewiseLinear };
  using Knot = std::pair<double, double>;  // (x, F(x))

  static MarginalDist uniform() { return MarginalDist(Kind::kUniform, {{0, 0}, {1, 1}}); }

  // Continuous CDF interpolating the knots linearly. Knots must start at
  // (0,0), end at (1,1), have strictly increasing x and nondecreasing F.
  static MarginalDist piecewise_linear(std::vector<Knot> knots) {
    if (knots.size() < 2) {
      throw std::invalid_argument("piecewise CDF needs at least two knots");
    }
    if (knots.front() != Knot{0.0, 0.0} || knots.back() != Knot{1.0, 1.0}) {
      throw std::invalid_argument(
          "piecewise CDF must start at (0,0) and end at (1,1)");
    }
    for (std::size_t k = 1; k < knots.size(); ++k) {
      if (!(knots[k].first > knots[k - 1].first)) {
        throw std::invalid_argument("piecewise CDF knots must have increasing x");
      }
      if (knots[k].second < knots[k - 1].second) {
        throw std::invalid_argument("piecewise CDF must be nondecreasing");
      }
    }
    return MarginalDist(Kind::kPiecewiseLinear, std::move(knots));
  }

  Kind kind() const { return kind_; }
  const std::vector<Knot>& knots() const { return knots_; }

  double cdf(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const auto hi = std::upper_bound(
        knots_.begin(), knots_.end(), x,
        [](double v, const Knot& k) { return v < k.first; });
    const auto lo = hi - 1;
    const double t = (x - lo->first) / (hi->first - lo->first);
    return lo->second + t * (hi->second - lo->second);
  }

  // Generalized inverse inf{x : F(x) >= p}; flat segments resolve to their
  // left end.
  double quantile(double p) const {
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) {
      for (const auto& k : knots_) {
        if (k.second >= 1.0) return k.first;
      }
      return 1.0;
    }
    for (std::size_t k = 1; k < knots_.size(); ++k) {
      const auto& [x0, f0] = knots_[k - 1];
      const auto& [x1, f1] = knots_[k];
      if (f1 >= p) {
        if (f1 == f0) return x0;
        return x0 + (p - f0) / (f1 - f0) * (x1 - x0);
      }
    }
    return 1.0;
  }

  friend bool operator==(const MarginalDist&, const MarginalDist&) = default;

 private:
  MarginalDist(Kind kind, std::vector<Knot> knots)
      : kind_(kind), knots_(std::move(knots)) {}

  Kind kind_;
  std::vector<Knot> knots_;
};

struct MarginalGrid {
  std::vector<double> points;
  std::vector<double> weights;
};

// Quantile midpoints F^{-1}((k - 1/2)/m), k = 1..m, each with weight 1/m.
inline MarginalGrid discretize(const MarginalDist& dist, int m) {
  if (m < 1) throw std::invalid_argument("type grid resolution m must be >= 1");
  MarginalGrid g;
  g.points.reserve(m);
  g.weights.assign(m, 1.0 / m);
  for (int k = 1; k <= m; ++k) {
    g.points.push_back(dist.quantile((k - 0.5) / m));
  }
  return g;
}

// An m x m product lattice of types with product weights. Index (i, j)
// refers to the i-th first-object point and j-th second-object point;
// flattening is i * m + j.
class TypeGrid {
 public:
  TypeGrid(std::vector<double> points, std::vector<double> weights)
      : points_(std::move(points)), weights_(std::move(weights)) {
    if (points_.empty() || points_.size() != weights_.size()) {
      throw std::invalid_argument("marginal points and weights must match");
    }
    CompensatedSum total;
    for (std::size_t k = 0; k < points_.size(); ++k) {
      if (points_[k] < 0.0 || points_[k] > 1.0) {
        throw std::invalid_argument("type points must lie in [0,1]");
      }
      if (k > 0 && points_[k] < points_[k - 1]) {
        throw std::invalid_argument("type points must be nondecreasing");
      }
      if (weights_[k] < 0.0) {
        throw std::invalid_argument("type weights must be nonnegative");
      }
      total.add(weights_[k]);
    }
    if (std::abs(total.value() - 1.0) > kTolerance) {
      throw std::invalid_argument("marginal weights must sum to 1");
    }
  }

  int resolution() const { return static_cast<int>(points_.size()); }
  int size() const { return resolution() * resolution(); }
  int index(int i, int j) const { return i * resolution() + j; }
  std::pair<int, int> coords(int index) const {
    return {index / resolution(), index % resolution()};
  }

  TypePoint point(int i, int j) const { return {points_[i], points_[j]}; }
  TypePoint point(int index) const {
    const auto [i, j] = coords(index);
    return point(i, j);
  }
  double weight(int i, int j) const { return weights_[i] * weights_[j]; }
  double weight(int index) const {
    const auto [i, j] = coords(index);
    return weight(i, j);
  }

  const std::vector<double>& marginal_points() const { return points_; }
  const std::vector<double>& marginal_weights() const { return weights_; }

 private:
  std::vector<double> points_;
  std::vector<double> weights_;
};

inline TypeGrid product_grid(const MarginalGrid& marginal) {
  return TypeGrid(marginal.points, marginal.weights);
}

// Position of an opponent bid relative to a query bid on one coordinate.
enum Relation : int { kBelow = 0, kEqual = 1, kAbove = 2 };

// Opponent mass in each of the nine regions {<, =, >} x {<, =, >} around a
// query bid. cell[r1][r2] uses Relation indices.
struct NineCell {
  std::array<std::array<double, 3>, 3> cell{};

  double operator()(Relation r1, Relation r2) const { return cell[r1][r2]; }
  double total() const {
    CompensatedSum s;
    for (const auto& row : cell) {
      for (double v : row) s.add(v);
    }
    return s.value();
  }
};

// Probability mass over the bid lattice.
class BidDistribution {
 public:
  // `mass` is dense, indexed by BidGrid::index_of.
  BidDistribution(BidGrid grid, std::vector<double> mass)
      : grid_(std::move(grid)), mass_(std::move(mass)) {
    if (static_cast<int>(mass_.size()) != grid_.num_pairs()) {
      throw std::invalid_argument("bid distribution size does not match grid");
    }
    CompensatedSum total;
    for (double v : mass_) {
      if (v < 0.0) throw std::invalid_argument("negative bid mass");
      total.add(v);
    }
    if (std::abs(total.value() - 1.0) > kTolerance) {
      throw std::invalid_argument("bid masses must sum to 1, got " +
                                  std::to_string(total.value()));
    }
    build_cumulative();
  }

  static BidDistribution point_mass(const BidGrid& grid, const BidPair& b) {
    check_on_grid(grid, b);
    std::vector<double> mass(grid.num_pairs(), 0.0);
    mass[grid.index_of(b)] = 1.0;
    return BidDistribution(grid, std::move(mass));
  }

  static BidDistribution from_atoms(
      const BidGrid& grid, std::span<const std::pair<BidPair, double>> atoms) {
    std::vector<CompensatedSum> acc(grid.num_pairs());
    for (const auto& [b, w] : atoms) {
      check_on_grid(grid, b);
      acc[grid.index_of(b)].add(w);
    }
    std::vector<double> mass(grid.num_pairs());
    for (std::size_t k = 0; k < mass.size(); ++k) mass[k] = acc[k].value();
    return BidDistribution(grid, std::move(mass));
  }

  const BidGrid& grid() const { return grid_; }
  double mass(const BidPair& b) const { return mass_[grid_.index_of(b)]; }
  const std::vector<double>& masses() const { return mass_; }

  double total() const {
    CompensatedSum s;
    for (double v : mass_) s.add(v);
    return s.value();
  }

  std::vector<std::pair<BidPair, double>> support() const {
    std::vector<std::pair<BidPair, double>> out;
    for (int k = 0; k < grid_.num_pairs(); ++k) {
      if (mass_[k] > 0.0) out.emplace_back(grid_.pair_at(k), mass_[k]);
    }
    return out;
  }

  // Mass with first coordinate strictly below / exactly at a tick.
  double first_below(int tick) const { return first_cum_[tick]; }
  double first_at(int tick) const { return first_marg_[tick]; }
  double second_below(int tick) const { return second_cum_[tick]; }
  double second_at(int tick) const { return second_marg_[tick]; }

  // Mass of bids with first coordinate < t1 and second coordinate < t2.
  double lower_left(int t1, int t2) const {
    return prefix_[static_cast<std::size_t>(t1) * stride() + t2];
  }

  // Same distribution with the two coordinates swapped.
  BidDistribution transposed() const {
    std::vector<double> mass(mass_.size());
    for (int k = 0; k < grid_.num_pairs(); ++k) {
      const BidPair b = grid_.pair_at(k);
      mass[grid_.index_of({b.b2, b.b1})] = mass_[k];
    }
    return BidDistribution(grid_, std::move(mass));
  }

 private:
  static void check_on_grid(const BidGrid& grid, const BidPair& b) {
    if (!grid.contains(b)) throw std::invalid_argument("bid is off the grid");
  }

  int stride() const { return grid_.num_levels() + 1; }

  void build_cumulative() {
    const int levels = grid_.num_levels();
    first_marg_.assign(levels, 0.0);
    second_marg_.assign(levels, 0.0);
    std::vector<CompensatedSum> f(levels), s(levels);
    for (int k = 0; k < grid_.num_pairs(); ++k) {
      const BidPair b = grid_.pair_at(k);
      f[b.b1].add(mass_[k]);
      s[b.b2].add(mass_[k]);
    }
    first_cum_.assign(levels + 1, 0.0);
    second_cum_.assign(levels + 1, 0.0);
    CompensatedSum fc, sc;
    for (int t = 0; t < levels; ++t) {
      first_marg_[t] = f[t].value();
      second_marg_[t] = s[t].value();
      fc.add(first_marg_[t]);
      sc.add(second_marg_[t]);
      first_cum_[t + 1] = fc.value();
      second_cum_[t + 1] = sc.value();
    }
    // prefix_[t1][t2] = sum over a < t1, c < t2, built column-wise within
    // each row so that rows without mass reproduce the previous row exactly.
    prefix_.assign(static_cast<std::size_t>(stride()) * stride(), 0.0);
    for (int t1 = 1; t1 <= levels; ++t1) {
      double row = 0.0;
      for (int t2 = 1; t2 <= levels; ++t2) {
        row += mass_[grid_.index_of({t1 - 1, t2 - 1})];
        prefix_[static_cast<std::size_t>(t1) * stride() + t2] =
            prefix_[static_cast<std::size_t>(t1 - 1) * stride() + t2] + row;
      }
    }
  }

  BidGrid grid_;
  std::vector<double> mass_;
  std::vector<double> first_marg_, second_marg_;
  std::vector<double> first_cum_, second_cum_;
  std::vector<double> prefix_;
};

// Pushforward of the type-grid weights through a bid assignment (one bid
// pair per grid index).
inline BidDistribution induced_bid_distribution(std::span<const BidPair> assignment,
                                                const TypeGrid& types,
                                                const BidGrid& bids) {
  if (static_cast<int>(assignment.size()) != types.size()) {
    throw std::invalid_argument("assignment does not cover the type grid");
  }
  std::vector<std::pair<BidPair, double>> atoms;
  atoms.reserve(assignment.size());
  for (int k = 0; k < types.size(); ++k) atoms.emplace_back(assignment[k], types.weight(k));
  return BidDistribution::from_atoms(bids, atoms);
}

// The nine-cell decomposition around b, computed from the dense masses.
inline NineCell cumulative_masses(const BidDistribution& mu, const BidPair& b) {
  if (!mu.grid().contains(b)) throw std::invalid_argument("bid is off the grid");
  std::array<std::array<CompensatedSum, 3>, 3> acc;
  auto relation = [](int theirs, int mine) {
    return theirs < mine ? kBelow : (theirs == mine ? kEqual : kAbove);
  };
  for (const auto& [beta, w] : mu.support()) {
    acc[relation(beta.b1, b.b1)][relation(beta.b2, b.b2)].add(w);
  }
  NineCell out;
  for (int r1 = 0; r1 < 3; ++r1) {
    for (int r2 = 0; r2 < 3; ++r2) out.cell[r1][r2] = acc[r1][r2].value();
  }
  return out;
}

}  // namespace simauc
