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

// Primitive objects of the two-bidder, two-object simultaneous first-price
// auction: the bid lattice, bidder types, valuations with synergy, ex-post
// allocation under independent per-object coin tie-breaking, and ex-post
// utility.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace simauc {

// Absolute tolerance used by every floating-point comparison in the library.
inline constexpr double kTolerance = 1e-12;

// Exact rational number with a positive, reduced denominator.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1) : num_(num), den_(den) {  // NOLINT
    if (den_ == 0) throw std::invalid_argument("rational with zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  // Accepts "p/q", an integer, or a plain decimal such as "2.25".
  static Rational parse(std::string_view text) {
    auto fail = [&]() -> Rational {
      throw std::invalid_argument("malformed rational '" + std::string(text) +
                                  "'");
    };
    auto parse_int = [&](std::string_view s) {
      std::int64_t v = 0;
      if (s.empty()) fail();
      const char* first = s.data();
      if (*first == '+') ++first;
      auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size()) fail();
      return v;
    };
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
      return Rational(parse_int(text.substr(0, slash)),
                      parse_int(text.substr(slash + 1)));
    }
    if (const auto dot = text.find('.'); dot != std::string_view::npos) {
      const std::string_view whole = text.substr(0, dot);
      const std::string_view frac = text.substr(dot + 1);
      if (frac.size() > 15 || frac.empty()) fail();
      const bool negative = !whole.empty() && whole.front() == '-';
      const std::int64_t w =
          (whole.empty() || whole == "-" || whole == "+") ? 0 : parse_int(whole);
      const std::int64_t f = parse_int(frac);
      if (f < 0) fail();
      std::int64_t scale = 1;
      for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
      const std::int64_t magnitude = (w < 0 ? -w : w) * scale + f;
      return Rational(negative ? -magnitude : magnitude, scale);
    }
    return Rational(parse_int(text));
  }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    return lhs <=> rhs;
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

// A bid pair on the lattice, stored as integer ticks of size 1/n so that
// comparisons and tie detection are exact.
struct BidPair {
  int b1 = 0;
  int b2 = 0;

  friend bool operator==(const BidPair&, const BidPair&) = default;
};

// Coordinatewise partial order: a >= b in both coordinates.
inline bool dominates(const BidPair& a, const BidPair& b) {
  return a.b1 >= b.b1 && a.b2 >= b.b2;
}
inline bool comparable(const BidPair& a, const BidPair& b) {
  return dominates(a, b) || dominates(b, a);
}
inline BidPair meet(const BidPair& a, const BidPair& b) {
  return {std::min(a.b1, b.b1), std::min(a.b2, b.b2)};
}
inline BidPair join(const BidPair& a, const BidPair& b) {
  return {std::max(a.b1, b.b1), std::max(a.b2, b.b2)};
}

// The finite action space {0, 1/n, ..., u_bar} per object. Requires
// u_bar * n to be an integer.
class BidGrid {
 public:
  BidGrid(int increments_per_unit, Rational max_bid)
      : n_(increments_per_unit), max_bid_(max_bid) {
    if (n_ < 1) throw std::invalid_argument("bid increments n must be >= 1");
    if (max_bid_ < Rational(0)) {
      throw std::invalid_argument("maximum bid must be nonnegative");
    }
    const __int128 scaled = static_cast<__int128>(max_bid_.num()) * n_;
    if (scaled % max_bid_.den() != 0) {
      throw std::invalid_argument("maximum bid " + max_bid_.str() +
                                  " is not a multiple of 1/" +
                                  std::to_string(n_));
    }
    top_ = static_cast<int>(scaled / max_bid_.den());
  }

  static BidGrid from_ticks(int increments_per_unit, int top_tick) {
    return BidGrid(increments_per_unit, Rational(top_tick, increments_per_unit));
  }

  int increments() const { return n_; }
  Rational max_bid() const { return max_bid_; }
  int top_tick() const { return top_; }
  int num_levels() const { return top_ + 1; }
  int num_pairs() const { return num_levels() * num_levels(); }

  double level(int tick) const {
    return static_cast<double>(tick) / static_cast<double>(n_);
  }
  Rational exact_level(int tick) const { return Rational(tick, n_); }

  std::vector<Rational> levels() const {
    std::vector<Rational> out;
    out.reserve(num_levels());
    for (int k = 0; k <= top_; ++k) out.push_back(exact_level(k));
    return out;
  }

  bool contains(const BidPair& b) const {
    return b.b1 >= 0 && b.b2 >= 0 && b.b1 <= top_ && b.b2 <= top_;
  }

  // Row-major flattening, first coordinate major.
  int index_of(const BidPair& b) const { return b.b1 * num_levels() + b.b2; }
  BidPair pair_at(int index) const {
    return {index / num_levels(), index % num_levels()};
  }

  // Nearest tick to a real value, clamped to the grid. Ties round down.
  int nearest_tick(double value) const {
    const double scaled = value * n_;
    int k = static_cast<int>(std::ceil(scaled - 0.5 - 1e-9));
    return std::clamp(k, 0, top_);
  }
  // Largest tick whose level does not exceed value (clamped to the grid).
  int floor_tick(double value) const {
    int k = static_cast<int>(std::floor(value * n_ + 1e-9));
    return std::clamp(k, 0, top_);
  }

  friend bool operator==(const BidGrid& a, const BidGrid& b) {
    return a.n_ == b.n_ && a.top_ == b.top_;
  }

 private:
  int n_ = 1;
  Rational max_bid_;
  int top_ = 0;
};

struct TypePoint {
  double x1 = 0.0;
  double x2 = 0.0;

  friend bool operator==(const TypePoint&, const TypePoint&) = default;
};

inline bool valid_type(const TypePoint& x) {
  return x.x1 >= 0.0 && x.x1 <= 1.0 && x.x2 >= 0.0 && x.x2 <= 1.0;
}

// Valuation u(x1, x2) of the bundle a bidder wins. u(x1, 0) and u(0, x2) are
// the stand-alone values of each object.
class UtilitySpec {
 public:
  using Fn = std::function<double(double, double)>;

  UtilitySpec(Fn u, std::string description)
      : u_(std::move(u)), description_(std::move(description)) {}

  // x1 + x2 + alpha * 1{x1 > 0 and x2 > 0}
  static UtilitySpec additive_synergy(double alpha) {
    return UtilitySpec(
        [alpha](double x1, double x2) {
          return x1 + x2 + ((x1 > 0.0 && x2 > 0.0) ? alpha : 0.0);
        },
        "additive_synergy(alpha=" + format_number(alpha) + ")");
  }

  // x1 * x2
  static UtilitySpec multiplicative() {
    return UtilitySpec([](double x1, double x2) { return x1 * x2; },
                       "multiplicative");
  }

  // sum_{i,j} c[i][j] x1^i x2^j
  static UtilitySpec polynomial(std::vector<std::vector<double>> coefficients) {
    std::string label = "custom_polynomial(";
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
      label += i ? ";" : "";
      for (std::size_t j = 0; j < coefficients[i].size(); ++j) {
        label += (j ? "," : "") + format_number(coefficients[i][j]);
      }
    }
    label += ")";
    return UtilitySpec(
        [c = std::move(coefficients)](double x1, double x2) {
          double result = 0.0;
          for (std::size_t i = c.size(); i-- > 0;) {
            double row = 0.0;
            for (std::size_t j = c[i].size(); j-- > 0;) row = row * x2 + c[i][j];
            result = result * x1 + row;
          }
          return result;
        },
        std::move(label));
  }

  double operator()(double x1, double x2) const { return u_(x1, x2); }
  double operator()(const TypePoint& x) const { return u_(x.x1, x.x2); }
  const std::string& description() const { return description_; }

 private:
  static std::string format_number(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
  }

  Fn u_;
  std::string description_;
};

// Synergy: u(x1,x2) - u(x1,0) - u(0,x2).
inline double synergy(const UtilitySpec& spec, const TypePoint& x) {
  return spec(x.x1, x.x2) - spec(x.x1, 0.0) - spec(0.0, x.x2);
}

// Per-type quantities entering the interim utility.
struct TypeValues {
  double standalone1 = 0.0;  // u(x1, 0)
  double standalone2 = 0.0;  // u(0, x2)
  double bundle = 0.0;       // u(x1, x2)
  double synergy = 0.0;
};

inline TypeValues evaluate(const UtilitySpec& spec, const TypePoint& x) {
  TypeValues v;
  v.standalone1 = spec(x.x1, 0.0);
  v.standalone2 = spec(0.0, x.x2);
  v.bundle = spec(x.x1, x.x2);
  v.synergy = synergy(spec, x);
  return v;
}

enum class Assumption { kNormalization, kA1, kA2, kA3 };

inline const char* to_string(Assumption a) {
  switch (a) {
    case Assumption::kNormalization: return "normalization";
    case Assumption::kA1: return "A1";
    case Assumption::kA2: return "A2";
    case Assumption::kA3: return "A3";
  }
  return "?";
}

// A failed inequality `lhs >= rhs` at the witness point(s). For the
// monotonicity assumptions, `x_prime` is the larger of the two comparable
// points and lhs is the value there.
struct AssumptionViolation {
  Assumption assumption;
  TypePoint x;
  TypePoint x_prime;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct ValidationReport {
  std::vector<AssumptionViolation> violations;

  bool ok() const { return violations.empty(); }
  bool violates(Assumption a) const {
    return std::any_of(violations.begin(), violations.end(),
                       [a](const auto& v) { return v.assumption == a; });
  }
};

// Samples u on a uniform resolution x resolution grid over [0,1]^2 and
// checks the normalization u(0,0) = 0 and assumptions A1-A3. Monotonicity is
// checked along lattice neighbours, which is equivalent to checking every
// comparable pair on the grid.
inline ValidationReport validate_assumptions(const UtilitySpec& spec,
                                             int grid_resolution = 101) {
  if (grid_resolution < 2) {
    throw std::invalid_argument("validation grid resolution must be >= 2");
  }
  const int r = grid_resolution;
  auto coord = [r](int k) { return static_cast<double>(k) / (r - 1); };
  std::vector<double> u(static_cast<std::size_t>(r) * r);
  std::vector<double> lam(u.size());
  auto at = [r](int a, int b) { return static_cast<std::size_t>(a) * r + b; };
  for (int a = 0; a < r; ++a) {
    for (int b = 0; b < r; ++b) {
      const TypePoint x{coord(a), coord(b)};
      u[at(a, b)] = spec(x);
      lam[at(a, b)] = synergy(spec, x);
    }
  }

  ValidationReport report;
  if (std::abs(u[at(0, 0)]) > kTolerance) {
    report.violations.push_back(
        {Assumption::kNormalization, {0, 0}, {0, 0}, u[at(0, 0)], 0.0});
  }
  auto check_step = [&](Assumption tag, const std::vector<double>& f, int a,
                        int b, int a2, int b2) {
    if (f[at(a2, b2)] < f[at(a, b)] - kTolerance) {
      report.violations.push_back({tag,
                                   {coord(a), coord(b)},
                                   {coord(a2), coord(b2)},
                                   f[at(a2, b2)],
                                   f[at(a, b)]});
    }
  };
  for (int a = 0; a < r; ++a) {
    for (int b = 0; b < r; ++b) {
      if (a + 1 < r) check_step(Assumption::kA1, u, a, b, a + 1, b);
      if (b + 1 < r) check_step(Assumption::kA1, u, a, b, a, b + 1);
      if (lam[at(a, b)] < -kTolerance) {
        const TypePoint x{coord(a), coord(b)};
        report.violations.push_back(
            {Assumption::kA2, x, x, lam[at(a, b)], 0.0});
      }
      if (a + 1 < r) check_step(Assumption::kA3, lam, a, b, a + 1, b);
      if (b + 1 < r) check_step(Assumption::kA3, lam, a, b, a, b + 1);
    }
  }
  return report;
}

// Outcome of a fair coin used to break a tie on one object.
enum class TieCoin { kFavorsI, kFavorsJ };

struct Allocation {
  bool won1 = false;
  bool won2 = false;

  friend bool operator==(const Allocation&, const Allocation&) = default;
};

// Bidder i's allocation against bidder j. Each object is resolved on its own;
// a tie goes to i iff that object's coin favors i.
inline Allocation allocate(const BidPair& b_i, const BidPair& b_j,
                           TieCoin tie1, TieCoin tie2) {
  auto wins = [](int mine, int theirs, TieCoin coin) {
    return mine > theirs || (mine == theirs && coin == TieCoin::kFavorsI);
  };
  return {wins(b_i.b1, b_j.b1, tie1), wins(b_i.b2, b_j.b2, tie2)};
}

// Quasi-linear ex-post utility; losing bids are not paid.
inline double ex_post_utility(const Allocation& a, const BidPair& b_i,
                              const TypePoint& x_i, const UtilitySpec& spec,
                              const BidGrid& bids) {
  const double pay1 = bids.level(b_i.b1);
  const double pay2 = bids.level(b_i.b2);
  if (a.won1 && a.won2) return spec(x_i.x1, x_i.x2) - (pay1 + pay2);
  if (a.won1) return spec(x_i.x1, 0.0) - pay1;
  if (a.won2) return spec(0.0, x_i.x2) - pay2;
  return 0.0;
}

// Probability that i wins both objects against the bid pair b_j, in quarters
// (0, 1, 2 or 4).
inline int q_both_quarters(const BidPair& b_i, const BidPair& b_j) {
  auto factor = [](int mine, int theirs) {
    return mine > theirs ? 2 : (mine == theirs ? 1 : 0);
  };
  return factor(b_i.b1, b_j.b1) * factor(b_i.b2, b_j.b2);
}

inline double q_both(const BidPair& b_i, const BidPair& b_j) {
  return q_both_quarters(b_i, b_j) / 4.0;
}

}  // namespace simauc
