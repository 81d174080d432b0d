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

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "simauc/distribution.hpp"
#include "simauc/model.hpp"

namespace simauc {

// A pure strategy on an m x m type grid: one bid pair per grid index
// (i * m + j). Monotonicity is not enforced by construction; see
// is_monotone().
class Strategy {
 public:
  Strategy() = default;
  Strategy(int resolution, std::vector<BidPair> bids)
      : m_(resolution), bids_(std::move(bids)) {
    if (m_ < 1 || static_cast<int>(bids_.size()) != m_ * m_) {
      throw std::invalid_argument("strategy must assign one bid per grid cell");
    }
  }

  static Strategy constant(int resolution, const BidPair& b) {
    return Strategy(resolution, std::vector<BidPair>(resolution * resolution, b));
  }

  int resolution() const { return m_; }
  int size() const { return m_ * m_; }
  const BidPair& operator()(int i, int j) const { return bids_[i * m_ + j]; }
  const BidPair& operator[](int index) const { return bids_[index]; }
  BidPair& operator[](int index) { return bids_[index]; }
  const std::vector<BidPair>& bids() const { return bids_; }

  std::uint64_t hash() const {
    std::uint64_t h = 1469598103934665603ull;
    for (const auto& b : bids_) {
      h = (h ^ static_cast<std::uint32_t>(b.b1)) * 1099511628211ull;
      h = (h ^ static_cast<std::uint32_t>(b.b2)) * 1099511628211ull;
    }
    return h;
  }

  friend bool operator==(const Strategy&, const Strategy&) = default;

 private:
  int m_ = 0;
  std::vector<BidPair> bids_;
};

inline BidDistribution induced_bid_distribution(const Strategy& s,
                                                const TypeGrid& types,
                                                const BidGrid& bids) {
  if (s.resolution() != types.resolution()) {
    throw std::invalid_argument("strategy and type grid resolutions differ");
  }
  return induced_bid_distribution(std::span<const BidPair>(s.bids()), types, bids);
}

struct MonotonicityCheck {
  bool monotone = true;
  // Grid indices (lower, upper) of the first neighbour pair where the upper
  // type bids below the lower one.
  std::optional<std::pair<int, int>> witness;

  explicit operator bool() const { return monotone; }
};

// Neighbour scan along both lattice axes; sufficient by transitivity.
inline MonotonicityCheck is_monotone(const Strategy& s) {
  const int m = s.resolution();
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const int here = i * m + j;
      if (i + 1 < m && !dominates(s[here + m], s[here])) {
        return {false, std::pair{here, here + m}};
      }
      if (j + 1 < m && !dominates(s[here + 1], s[here])) {
        return {false, std::pair{here, here + 1}};
      }
    }
  }
  return {};
}

// Draws an independent uniform bid pair per cell, then replaces each cell by
// the coordinatewise max of itself and its already-processed left and lower
// neighbours (row-major). The result is monotone and biased toward higher
// bids in upper cells.
inline Strategy random_monotone(const TypeGrid& types, const BidGrid& bids,
                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> level(0, bids.top_tick());
  const int m = types.resolution();
  std::vector<BidPair> out(m * m);
  for (auto& b : out) {
    b.b1 = level(rng);
    b.b2 = level(rng);
  }
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      BidPair& b = out[i * m + j];
      if (i > 0) b = join(b, out[(i - 1) * m + j]);
      if (j > 0) b = join(b, out[i * m + j - 1]);
    }
  }
  return Strategy(m, std::move(out));
}

struct EnumerationOutcome {
  std::uint64_t count = 0;
  bool truncated = false;
};

// Visits every monotone strategy exactly once in lexicographic order of the
// flattened (b1, b2) sequence. Stops with truncated = true once `cap`
// strategies were visited and more remain. The visitor may return false to
// stop early (not reported as truncation).
inline EnumerationOutcome enumerate_monotone(
    const TypeGrid& types, const BidGrid& bids, std::uint64_t cap,
    const std::function<bool(const Strategy&)>& visit) {
  const int m = types.resolution();
  const int top = bids.top_tick();
  std::vector<BidPair> cur(m * m);
  EnumerationOutcome out;
  bool stop = false;

  std::function<void(int)> fill = [&](int cell) {
    if (stop) return;
    if (cell == m * m) {
      if (out.count == cap) {
        out.truncated = true;
        stop = true;
        return;
      }
      ++out.count;
      if (!visit(Strategy(m, cur))) stop = true;
      return;
    }
    const int i = cell / m;
    const int j = cell % m;
    BidPair lo{0, 0};
    if (i > 0) lo = join(lo, cur[cell - m]);
    if (j > 0) lo = join(lo, cur[cell - 1]);
    for (int b1 = lo.b1; b1 <= top && !stop; ++b1) {
      for (int b2 = lo.b2; b2 <= top && !stop; ++b2) {
        cur[cell] = {b1, b2};
        fill(cell + 1);
      }
    }
  };
  fill(0);
  return out;
}

inline std::vector<Strategy> enumerate_monotone(const TypeGrid& types,
                                                const BidGrid& bids,
                                                std::uint64_t cap,
                                                bool* truncated = nullptr) {
  std::vector<Strategy> all;
  const auto outcome = enumerate_monotone(types, bids, cap, [&](const Strategy& s) {
    all.push_back(s);
    return true;
  });
  if (truncated) *truncated = outcome.truncated;
  return all;
}

// Nearest grid level to half of each stand-alone value.
inline Strategy half_value_strategy(const TypeGrid& types, const BidGrid& bids,
                                    const UtilitySpec& spec) {
  std::vector<BidPair> out(types.size());
  for (int k = 0; k < types.size(); ++k) {
    const TypePoint x = types.point(k);
    out[k] = {bids.nearest_tick(0.5 * spec(x.x1, 0.0)),
              bids.nearest_tick(0.5 * spec(0.0, x.x2))};
  }
  return Strategy(types.resolution(), std::move(out));
}

// Largest grid level not exceeding each stand-alone value.
inline Strategy truthful_strategy(const TypeGrid& types, const BidGrid& bids,
                                  const UtilitySpec& spec) {
  std::vector<BidPair> out(types.size());
  for (int k = 0; k < types.size(); ++k) {
    const TypePoint x = types.point(k);
    out[k] = {bids.floor_tick(spec(x.x1, 0.0)), bids.floor_tick(spec(0.0, x.x2))};
  }
  return Strategy(types.resolution(), std::move(out));
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// CSV with header x1_index,x2_index,b1,b2. Bids are written as decimals with
// 17 significant digits and mapped back to the nearest tick when read.
inline void write_strategy_csv(std::ostream& os, const Strategy& s,
                               const BidGrid& bids) {
  os << "x1_index,x2_index,b1,b2\n";
  for (int i = 0; i < s.resolution(); ++i) {
    for (int j = 0; j < s.resolution(); ++j) {
      const BidPair& b = s(i, j);
      os << i << ',' << j << ',' << format_double(bids.level(b.b1)) << ','
         << format_double(bids.level(b.b2)) << '\n';
    }
  }
}

inline Strategy read_strategy_csv(std::istream& is, int resolution,
                                  const BidGrid& bids) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("x1_index,x2_index,b1,b2", 0) != 0) {
    throw std::invalid_argument("strategy CSV: missing header");
  }
  const int m = resolution;
  std::vector<BidPair> out(m * m);
  std::vector<bool> seen(m * m, false);
  auto to_tick = [&](double v) {
    const double scaled = v * bids.increments();
    const long k = std::lround(scaled);
    if (std::abs(scaled - static_cast<double>(k)) > 1e-9 || k < 0 ||
        k > bids.top_tick()) {
      throw std::invalid_argument("strategy CSV: bid " + format_double(v) +
                                  " is not a grid level");
    }
    return static_cast<int>(k);
  };
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string f[4];
    for (auto& field : f) {
      if (!std::getline(row, field, ',')) {
        throw std::invalid_argument("strategy CSV: short row '" + line + "'");
      }
    }
    const int i = std::stoi(f[0]);
    const int j = std::stoi(f[1]);
    if (i < 0 || j < 0 || i >= m || j >= m) {
      throw std::invalid_argument("strategy CSV: index out of range");
    }
    out[i * m + j] = {to_tick(std::stod(f[2])), to_tick(std::stod(f[3]))};
    seen[i * m + j] = true;
  }
  for (bool s : seen) {
    if (!s) throw std::invalid_argument("strategy CSV: missing grid cells");
  }
  return Strategy(m, std::move(out));
}

}  // namespace simauc
