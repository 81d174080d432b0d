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

// Scenario files: a flat TOML document describing one instance.
//
//   n = 4                         # bid increments per unit
//   u_bar = "9/4"                 # optional; rational string or number
//   m = 5                         # type grid points per object
//   seed = 1
//   distribution = "uniform"
//   # distribution = { kind = "piecewise", knots = [[0, 0], [0.5, 0.8], [1, 1]] }
//   utility = { kind = "additive_synergy", alpha = 0.3 }
//   # utility = { kind = "multiplicative" }
//   # utility = { kind = "custom_polynomial", coefficients = [[0, 1], [1, 2]] }
//   max_iter = 200
//   init = "half_value"           # half_value | truthful | zero
//   sweep_samples = 200

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "simauc/distribution.hpp"
#include "simauc/model.hpp"
#include "simauc/solver.hpp"
#include "simauc/strategy.hpp"

namespace simauc {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct UtilityConfig {
  enum class Kind { kAdditiveSynergy, kMultiplicative, kCustomPolynomial };
  Kind kind = Kind::kAdditiveSynergy;
  double alpha = 0.0;
  std::vector<std::vector<double>> coefficients;

  UtilitySpec build() const {
    switch (kind) {
      case Kind::kAdditiveSynergy: return UtilitySpec::additive_synergy(alpha);
      case Kind::kMultiplicative: return UtilitySpec::multiplicative();
      case Kind::kCustomPolynomial: return UtilitySpec::polynomial(coefficients);
    }
    throw std::logic_error("unknown utility kind");
  }

  friend bool operator==(const UtilityConfig&, const UtilityConfig&) = default;
};

enum class InitRule { kHalfValue, kTruthful, kZero };

struct Scenario {
  int n = 4;
  std::optional<Rational> u_bar;
  int m = 5;
  MarginalDist distribution = MarginalDist::uniform();
  UtilityConfig utility;
  std::uint64_t seed = 1;
  int max_iter = 200;
  InitRule init = InitRule::kHalfValue;
  int sweep_samples = 200;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

namespace detail {

inline double number(const toml::node& node, const std::string& field) {
  if (auto v = node.value<double>()) return *v;
  throw ConfigError(field, "expected a number");
}

inline std::int64_t integer(const toml::node& node, const std::string& field) {
  if (!node.is_integer()) throw ConfigError(field, "expected an integer");
  return *node.value<std::int64_t>();
}

inline void reject_unknown(const toml::table& t, std::initializer_list<std::string_view> known,
                           const std::string& where) {
  for (const auto& [key, value] : t) {
    bool ok = false;
    for (auto k : known) ok = ok || key.str() == k;
    if (!ok) throw ConfigError(where + std::string(key.str()), "unknown key");
  }
}

inline MarginalDist parse_distribution(const toml::node& node) {
  if (auto s = node.value<std::string>()) {
    if (*s == "uniform") return MarginalDist::uniform();
    throw ConfigError("distribution", "unknown distribution '" + *s + "'");
  }
  const toml::table* t = node.as_table();
  if (!t) throw ConfigError("distribution", "expected a string or inline table");
  reject_unknown(*t, {"kind", "knots"}, "distribution.");
  const auto kind = (*t)["kind"].value<std::string>();
  if (!kind) throw ConfigError("distribution.kind", "missing");
  if (*kind == "uniform") return MarginalDist::uniform();
  if (*kind != "piecewise") {
    throw ConfigError("distribution.kind", "unknown kind '" + *kind + "'");
  }
  const toml::array* knots = (*t)["knots"].as_array();
  if (!knots) throw ConfigError("distribution.knots", "expected an array of [x, F(x)]");
  std::vector<MarginalDist::Knot> parsed;
  for (const auto& k : *knots) {
    const toml::array* pair = k.as_array();
    if (!pair || pair->size() != 2) {
      throw ConfigError("distribution.knots", "each knot must be [x, F(x)]");
    }
    parsed.emplace_back(number(*pair->get(0), "distribution.knots"),
                        number(*pair->get(1), "distribution.knots"));
  }
  try {
    return MarginalDist::piecewise_linear(std::move(parsed));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("distribution.knots", e.what());
  }
}

inline UtilityConfig parse_utility(const toml::node& node) {
  const toml::table* t = node.as_table();
  if (!t) throw ConfigError("utility", "expected an inline table");
  const auto kind = (*t)["kind"].value<std::string>();
  if (!kind) throw ConfigError("utility.kind", "missing");
  UtilityConfig u;
  if (*kind == "additive_synergy") {
    reject_unknown(*t, {"kind", "alpha"}, "utility.");
    u.kind = UtilityConfig::Kind::kAdditiveSynergy;
    const toml::node* alpha = t->get("alpha");
    if (!alpha) throw ConfigError("utility.alpha", "missing");
    u.alpha = number(*alpha, "utility.alpha");
    if (!(u.alpha >= 0.0)) throw ConfigError("utility.alpha", "must be >= 0");
  } else if (*kind == "multiplicative") {
    reject_unknown(*t, {"kind"}, "utility.");
    u.kind = UtilityConfig::Kind::kMultiplicative;
  } else if (*kind == "custom_polynomial") {
    reject_unknown(*t, {"kind", "coefficients"}, "utility.");
    u.kind = UtilityConfig::Kind::kCustomPolynomial;
    const toml::array* rows = (*t)["coefficients"].as_array();
    if (!rows || rows->empty()) {
      throw ConfigError("utility.coefficients", "expected a nonempty array of rows");
    }
    for (const auto& row : *rows) {
      const toml::array* r = row.as_array();
      if (!r) throw ConfigError("utility.coefficients", "each row must be an array");
      std::vector<double> parsed;
      for (const auto& c : *r) parsed.push_back(number(c, "utility.coefficients"));
      u.coefficients.push_back(std::move(parsed));
    }
    if (u.coefficients[0].empty() || u.coefficients[0][0] != 0.0) {
      throw ConfigError("utility.coefficients", "constant term must be 0 (u(0,0) = 0)");
    }
  } else {
    throw ConfigError("utility.kind", "unknown kind '" + *kind + "'");
  }
  return u;
}

inline const char* init_name(InitRule r) {
  switch (r) {
    case InitRule::kHalfValue: return "half_value";
    case InitRule::kTruthful: return "truthful";
    case InitRule::kZero: return "zero";
  }
  return "?";
}

}  // namespace detail

inline Scenario parse_scenario(std::string_view text) {
  toml::table doc;
  try {
    doc = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << "line " << e.source().begin.line << ": " << e.description();
    throw ConfigError("scenario", os.str());
  }
  detail::reject_unknown(doc, {"n", "u_bar", "m", "seed", "distribution", "utility",
                               "max_iter", "init", "sweep_samples"},
                         "");
  Scenario s;
  auto positive = [&](std::string_view key, int& into, int minimum) {
    if (const toml::node* node = doc.get(key)) {
      const std::int64_t v = detail::integer(*node, std::string(key));
      if (v < minimum || v > 1'000'000) {
        throw ConfigError(std::string(key), "must be an integer >= " + std::to_string(minimum));
      }
      into = static_cast<int>(v);
    }
  };
  positive("n", s.n, 1);
  positive("m", s.m, 1);
  positive("max_iter", s.max_iter, 0);
  positive("sweep_samples", s.sweep_samples, 1);
  if (const toml::node* node = doc.get("seed")) {
    const std::int64_t v = detail::integer(*node, "seed");
    if (v < 0) throw ConfigError("seed", "must be nonnegative");
    s.seed = static_cast<std::uint64_t>(v);
  }
  if (const toml::node* node = doc.get("u_bar")) {
    if (auto text_value = node->value<std::string>()) {
      try {
        s.u_bar = Rational::parse(*text_value);
      } catch (const std::invalid_argument& e) {
        throw ConfigError("u_bar", e.what());
      }
    } else {
      const double v = detail::number(*node, "u_bar");
      const double scaled = v * s.n;
      const double k = std::round(scaled);
      if (std::abs(scaled - k) > 1e-9) {
        throw ConfigError("u_bar", "u_bar * n must be an integer");
      }
      s.u_bar = Rational(static_cast<std::int64_t>(k), s.n);
    }
  }
  if (const toml::node* node = doc.get("distribution")) {
    s.distribution = detail::parse_distribution(*node);
  }
  if (const toml::node* node = doc.get("utility")) {
    s.utility = detail::parse_utility(*node);
  }
  if (const toml::node* node = doc.get("init")) {
    const auto v = node->value<std::string>();
    if (v == "half_value") s.init = InitRule::kHalfValue;
    else if (v == "truthful") s.init = InitRule::kTruthful;
    else if (v == "zero") s.init = InitRule::kZero;
    else throw ConfigError("init", "expected half_value, truthful or zero");
  }
  return s;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("scenario", "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

inline std::string to_toml(const Scenario& s) {
  std::ostringstream os;
  os << "n = " << s.n << '\n';
  if (s.u_bar) os << "u_bar = \"" << s.u_bar->str() << "\"\n";
  os << "m = " << s.m << '\n';
  os << "seed = " << s.seed << '\n';
  if (s.distribution.kind() == MarginalDist::Kind::kUniform) {
    os << "distribution = \"uniform\"\n";
  } else {
    os << "distribution = { kind = \"piecewise\", knots = [";
    const auto& knots = s.distribution.knots();
    for (std::size_t k = 0; k < knots.size(); ++k) {
      os << (k ? ", " : "") << '[' << format_double(knots[k].first) << ", "
         << format_double(knots[k].second) << ']';
    }
    os << "] }\n";
  }
  switch (s.utility.kind) {
    case UtilityConfig::Kind::kAdditiveSynergy:
      os << "utility = { kind = \"additive_synergy\", alpha = "
         << format_double(s.utility.alpha) << " }\n";
      break;
    case UtilityConfig::Kind::kMultiplicative:
      os << "utility = { kind = \"multiplicative\" }\n";
      break;
    case UtilityConfig::Kind::kCustomPolynomial:
      os << "utility = { kind = \"custom_polynomial\", coefficients = [";
      for (std::size_t i = 0; i < s.utility.coefficients.size(); ++i) {
        os << (i ? ", " : "") << '[';
        const auto& row = s.utility.coefficients[i];
        for (std::size_t j = 0; j < row.size(); ++j) {
          os << (j ? ", " : "") << format_double(row[j]);
        }
        os << ']';
      }
      os << "] }\n";
      break;
  }
  os << "max_iter = " << s.max_iter << '\n';
  os << "init = \"" << detail::init_name(s.init) << "\"\n";
  os << "sweep_samples = " << s.sweep_samples << '\n';
  return os.str();
}

// Bid lattice for a scenario. Without an override the top bid is u(1,1),
// or the largest multiple of 1/n below it when u(1,1) is off the grid.
inline BidGrid make_bid_grid(const Scenario& s, const UtilitySpec& u) {
  const double u_max = u(1.0, 1.0);
  if (s.u_bar) {
    if (s.u_bar->to_double() > u_max + kTolerance) {
      throw ConfigError("u_bar", "must not exceed u(1,1) = " + format_double(u_max));
    }
    try {
      return BidGrid(s.n, *s.u_bar);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("u_bar", e.what());
    }
  }
  if (!(u_max > 0.0)) throw ConfigError("utility", "u(1,1) must be positive");
  const double scaled = u_max * s.n;
  const double nearest = std::round(scaled);
  const int top = std::abs(scaled - nearest) <= 1e-9 ? static_cast<int>(nearest)
                                                     : static_cast<int>(std::floor(scaled));
  return BidGrid::from_ticks(s.n, top);
}

inline Environment make_environment(const Scenario& s) {
  UtilitySpec u = s.utility.build();
  BidGrid bids = make_bid_grid(s, u);
  return Environment(product_grid(discretize(s.distribution, s.m)), std::move(u),
                     std::move(bids));
}

inline Strategy initial_strategy(const Scenario& s, const Environment& env) {
  switch (s.init) {
    case InitRule::kHalfValue:
      return half_value_strategy(env.types(), env.bids(), env.utility());
    case InitRule::kTruthful:
      return truthful_strategy(env.types(), env.bids(), env.utility());
    case InitRule::kZero:
      return Strategy::constant(env.types().resolution(), {0, 0});
  }
  throw std::logic_error("unknown init rule");
}

}  // namespace simauc
