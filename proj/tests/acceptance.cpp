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


// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "simauc/interim.hpp"
#include "simauc/properties.hpp"
#include "simauc/scenario.hpp"
#include "simauc/simulation.hpp"
#include "simauc/solver.hpp"

namespace simauc {
namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

TypeGrid uniform_grid(int m) { return product_grid(discretize(MarginalDist::uniform(), m)); }

Environment environment(const UtilitySpec& u, int n, int m) {
  Scenario s;
  s.n = n;
  s.m = m;
  return Environment(uniform_grid(m), u, make_bid_grid(s, u));
}

// H and D case values in quarters by main category and sub-case.
constexpr int kCaseValues[5][3] = {{0, 2, 4}, {0, 1, 2}, {0, 0, 0}, {0, 1, 2}, {0, 0, 0}};

Verdict hd_table_reproduction() {
  std::uint64_t mismatches = 0, negative = 0, undefined = 0, quintuples = 0;
  for (int n : {2, 4}) {
    const HDSummary s = hd_full_enumeration(BidGrid::from_ticks(n, n));
    quintuples += s.quintuples;
    negative += s.negative;
    undefined += s.undefined_hits;
    for (int c = 0; c < 5; ++c) {
      for (int k = 0; k < 3; ++k) {
        for (int v : s.h_values[c][k]) mismatches += v != kCaseValues[c][k];
        for (int v : s.d_values[c][k]) mismatches += v != kCaseValues[c][k];
        // On n = 4 every sub-case of every category is reached.
        if (n == 4 && (s.h_values[c][k].empty() && s.d_values[c][k].empty())) ++mismatches;
      }
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "quintuples=%llu value_mismatches=%llu negative=%llu undefined_hits=%llu",
                static_cast<unsigned long long>(quintuples),
                static_cast<unsigned long long>(mismatches),
                static_cast<unsigned long long>(negative),
                static_cast<unsigned long long>(undefined));
  return {mismatches == 0 && negative == 0 && undefined == 0, buf};
}

Verdict inequality_w() {
  const Environment env = environment(UtilitySpec::additive_synergy(0.3), 4, 5);
  std::uint64_t violations = 0;
  for (int k = 0; k < 500; ++k) {
    const Strategy s = random_monotone(env.types(), env.bids(), sweep_seed(1, k));
    violations += check_ineq_w(env.induced(s), 1).violations;
  }
  return {violations == 0, "strategies=500 violations=" + std::to_string(violations)};
}

struct PropertySweep {
  std::string label;
  std::uint64_t wsc = 0;
  std::uint64_t wqs = 0;
};

std::vector<PropertySweep> property_sweeps() {
  const std::vector<std::pair<std::string, UtilitySpec>> specs = {
      {"additive(0)", UtilitySpec::additive_synergy(0.0)},
      {"additive(0.3)", UtilitySpec::additive_synergy(0.3)},
      {"multiplicative", UtilitySpec::multiplicative()},
  };
  std::vector<PropertySweep> out;
  for (const auto& [label, u] : specs) {
    const Environment env = environment(u, 4, 5);
    PropertySweep s{label};
    for (int k = 0; k < 200; ++k) {
      const BidDistribution mu =
          env.induced(random_monotone(env.types(), env.bids(), sweep_seed(1, k)));
      s.wsc += check_wsc(env, mu, 1).violations;
      s.wqs += check_wqs(env, mu, 1).violations;
    }
    out.push_back(s);
  }
  return out;
}

// Negative control: u = 3 x1 + 3 x2 + 2 x1 x2 - 1.75 (x1 x2)^2 keeps u
// increasing and the synergy nonnegative, but the synergy falls near (1,1).
Verdict single_crossing(const std::vector<PropertySweep>& sweeps) {
  std::string detail;
  bool pass = true;
  for (const auto& s : sweeps) {
    detail += s.label + "=" + std::to_string(s.wsc) + " ";
    pass = pass && s.wsc == 0;
  }
  const UtilitySpec control = UtilitySpec::polynomial({{0, 3}, {3, 2}, {0, 0, -1.75}});
  const ValidationReport report = validate_assumptions(control);
  const Environment env = environment(control, 4, 5);
  std::uint64_t found = 0;
  int seeds = 0;
  for (int k = 0; k < 200 && found == 0; ++k, ++seeds) {
    const BidDistribution mu =
        env.induced(random_monotone(env.types(), env.bids(), sweep_seed(1, k)));
    found = check_wsc(env, mu, 1).violations;
  }
  const bool control_ok = report.violates(Assumption::kA3) && found > 0;
  detail += "| control: A3_violated=" + std::string(report.violates(Assumption::kA3) ? "yes" : "no") +
            " violations=" + std::to_string(found) + " after " + std::to_string(seeds) +
            " strategies";
  return {pass && control_ok, detail};
}

Verdict quasi_supermodularity(const std::vector<PropertySweep>& sweeps) {
  std::string detail;
  bool pass = true;
  for (const auto& s : sweeps) {
    detail += s.label + "=" + std::to_string(s.wqs) + " ";
    pass = pass && s.wqs == 0;
  }
  return {pass, detail};
}

Verdict identities() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> ticks(1, 8);
  double worst_p3 = 0.0, worst_v = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const BidGrid g = BidGrid::from_ticks(4, ticks(rng));
    const BidDistribution mu = oracle::random_distribution(g, rng);
    const BidPair b = g.pair_at(std::uniform_int_distribution<int>(0, g.num_pairs() - 1)(rng));
    const TypePoint x{unit(rng), unit(rng)};
    const UtilitySpec u = oracle::random_valid_spec(rng);
    const WinProbs w = win_probs(mu, b);
    worst_p3 = std::max(worst_p3, std::abs(w.p3 - q3(mu, b)));
    worst_v = std::max(worst_v, std::abs(interim_utility_expanded(b, x, mu, u) -
                                         interim_utility(b, x, mu, u)));
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "draws=1000 max|P3-Q3|=%g max|Ve-Vg|=%g", worst_p3, worst_v);
  return {worst_p3 == 0.0 && worst_v <= 1e-12, buf};
}

// One-increment payoff bound: the price change of moving one bid by one
// grid step, 1/n.
Verdict decoupling() {
  constexpr int n = 10, m = 21;
  const UtilitySpec u = UtilitySpec::additive_synergy(0.0);
  const Environment env(uniform_grid(m), u, BidGrid::from_ticks(n, n));
  const Strategy init = half_value_strategy(env.types(), env.bids(), u);
  const SolveResult r = iterate_best_response(init, init, env, 500);

  const auto& pts = env.types().marginal_points();
  std::vector<int> start(m);
  for (int i = 0; i < m; ++i) start[i] = env.bids().nearest_tick(0.5 * pts[i]);
  const auto one = oracle::solve_single_object(pts, env.types().marginal_weights(), n,
                                               env.bids().top_tick(), start, start, 500,
                                               kTolerance);
  const double increment = 1.0 / n;
  double worst_half = 0.0;
  int oracle_mismatch = 0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      for (int bidder = 0; bidder < 2; ++bidder) {
        const BidPair& b = bidder == 0 ? r.s1(i, j) : r.s2(i, j);
        const auto& ref = bidder == 0 ? one.bidder1 : one.bidder2;
        worst_half = std::max({worst_half, std::abs(env.bids().level(b.b1) - 0.5 * pts[i]),
                               std::abs(env.bids().level(b.b2) - 0.5 * pts[j])});
        oracle_mismatch += b.b1 != ref[i] || b.b2 != ref[j];
      }
    }
  }
  const bool regret_ok = r.max_regret == 0.0 || r.max_regret <= increment;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "status=%s period=%d max_regret=%.6g bound=%.3g max|b-x/2|=%.4g "
                "oracle_mismatches=%d oracle_status=%s",
                to_string(r.status.kind), r.status.period, r.max_regret, increment, worst_half,
                oracle_mismatch, one.converged ? "converged" : "cycled");
  return {regret_ok && worst_half <= increment + 1e-12 && oracle_mismatch == 0 &&
              is_monotone(r.s1).monotone && is_monotone(r.s2).monotone,
          buf};
}

Verdict existence() {
  int exact = 0, total = 0, non_monotone = 0;
  std::string trend;
  for (double alpha : {0.0, 0.3, 1.0}) {
    for (int n : {2, 4, 6}) {
      std::string eps;
      bool all_exact = true;
      for (int m : {2, 4, 8}) {
        const Environment env = environment(UtilitySpec::additive_synergy(alpha), n, m);
        const Strategy init = half_value_strategy(env.types(), env.bids(), env.utility());
        const SolveResult r = iterate_best_response(init, init, env, 500);
        ++total;
        const bool monotone = is_monotone(r.s1).monotone && is_monotone(r.s2).monotone;
        non_monotone += !monotone;
        if (r.max_regret == 0.0 && monotone) ++exact;
        all_exact = all_exact && r.max_regret == 0.0;
        char e[32];
        std::snprintf(e, sizeof e, "%s%.3g", eps.empty() ? "" : "/", r.max_regret);
        eps += e;
      }
      if (!all_exact) {
        char head[48];
        std::snprintf(head, sizeof head, " [alpha=%g n=%d eps(m=2/4/8)=", alpha, n);
        trend += head + eps + "]";
      }
    }
  }
  return {exact >= 5 && non_monotone == 0,
          "scenarios=" + std::to_string(total) + " zero_regret=" + std::to_string(exact) +
              " non_monotone=" + std::to_string(non_monotone) +
              (trend.empty() ? "" : " trend:" + trend)};
}

Verdict monte_carlo() {
  constexpr std::uint64_t kDraws = 100000;
  std::mt19937_64 rng(8);
  int comparisons = 0, outside = 0;
  double worst = 0.0;
  for (int pair = 0; pair < 20; ++pair) {
    const int n = std::uniform_int_distribution<int>(2, 6)(rng);
    const int m = std::uniform_int_distribution<int>(2, 9)(rng);
    const UtilitySpec u = oracle::random_valid_spec(rng);
    const Environment env = environment(u, n, m);
    const Strategy s1 = random_monotone(env.types(), env.bids(), rng());
    const Strategy s2 = random_monotone(env.types(), env.bids(), rng());
    const SimStats stats = run_simulation(env, s1, s2, kDraws, rng(), 1);
    const BidDistribution mu = env.induced(s2);
    double p[3] = {0, 0, 0};
    for (int k = 0; k < env.types().size(); ++k) {
      const WinProbs w = win_probs(mu, s1[k]);
      p[0] += env.types().weight(k) * w.p3;
      p[1] += env.types().weight(k) * w.p1;
      p[2] += env.types().weight(k) * w.p2;
    }
    const double freq[3] = {stats.frequency(0, kBoth), stats.frequency(0, kOnly1),
                            stats.frequency(0, kOnly2)};
    for (int c = 0; c < 3; ++c) {
      const double se = std::sqrt(p[c] * (1 - p[c]) / kDraws);
      // A certain or impossible outcome must be reproduced exactly, up to
      // the round-off in the type-averaged probability.
      const double diff = std::abs(freq[c] - p[c]);
      const double z = se > 1e-9 ? diff / se : (diff <= 1e-12 ? 0.0 : 1e9);
      worst = std::max(worst, z);
      ++comparisons;
      outside += z > 3.0;
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "pairs=20 comparisons=%d outside_3se=%d max_z=%.3f",
                comparisons, outside, worst);
  return {outside == 0, buf};
}

}  // namespace
}  // namespace simauc

int main() {
  using namespace simauc;
  using Clock = std::chrono::steady_clock;
  int failures = 0;
  auto report = [&](int id, const char* name, double limit_s, const std::function<Verdict()>& f) {
    const auto t0 = Clock::now();
    const Verdict o = f();
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool pass = o.pass && secs < limit_s;
    failures += !pass;
    std::printf("[%s] %d %s: %s (%.2fs, limit %.0fs)\n", pass ? "PASS" : "FAIL", id, name,
                o.detail.c_str(), secs, limit_s);
    std::fflush(stdout);
  };

  report(1, "H-D table reproduction", 10, hd_table_reproduction);
  report(2, "inequality (w) sweep", 60, inequality_w);
  std::vector<PropertySweep> sweeps;
  const auto t0 = Clock::now();
  sweeps = property_sweeps();
  const double sweep_secs = std::chrono::duration<double>(Clock::now() - t0).count();
  report(3, "weak single crossing", 120 - sweep_secs, [&] { return single_crossing(sweeps); });
  report(4, "weak quasi-supermodularity", 120 - sweep_secs,
         [&] { return quasi_supermodularity(sweeps); });
  report(5, "P/Q identities and form equivalence", 10, identities);
  report(6, "decoupling benchmark", 120, decoupling);
  report(7, "monotone equilibrium existence", 300, existence);
  report(8, "Monte Carlo consistency", 60, monte_carlo);
  std::printf("%d of 8 criteria passed\n", 8 - failures);
  return failures == 0 ? 0 : 1;
}
