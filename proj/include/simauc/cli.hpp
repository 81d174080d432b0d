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

// Command-line entry points. Exit codes: 0 success, 1 configuration or usage
// error, 2 a property violation (from `verify`, or a failed best-reply
// selection during `solve`/`simulate`).

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "simauc/interim.hpp"
#include "simauc/properties.hpp"
#include "simauc/scenario.hpp"
#include "simauc/simulation.hpp"
#include "simauc/solver.hpp"
#include "simauc/strategy.hpp"

namespace simauc {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitViolation = 2;

namespace cli {

inline void write_solution_csv(std::ostream& os, const SolveResult& r,
                               const Environment& env) {
  const EquilibriumCheck check = check_equilibrium(r.s1, r.s2, env);
  const BidGrid& g = env.bids();
  os << "bidder,x1_index,x2_index,x1,x2,b1,b2,regret\n";
  for (int bidder = 0; bidder < 2; ++bidder) {
    const Strategy& s = bidder == 0 ? r.s1 : r.s2;
    for (int k = 0; k < env.types().size(); ++k) {
      const auto [i, j] = env.types().coords(k);
      const TypePoint x = env.types().point(k);
      os << bidder + 1 << ',' << i << ',' << j << ',' << format_double(x.x1) << ','
         << format_double(x.x2) << ',' << format_double(g.level(s[k].b1)) << ','
         << format_double(g.level(s[k].b2)) << ','
         << format_double(check.per_type[bidder][k].regret) << '\n';
    }
  }
}

inline void write_summary_csv(std::ostream& os, const SolveResult& r) {
  os << "status,epsilon,period,iterations,max_regret\n"
     << to_string(r.status.kind) << ',' << format_double(r.status.epsilon) << ','
     << r.status.period << ',' << r.iterations << ',' << format_double(r.max_regret)
     << '\n';
}

inline void write_file(const std::filesystem::path& path,
                       const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path);
  if (!out) throw ConfigError("--out", "cannot write '" + path.string() + "'");
  body(out);
}

inline Strategy load_strategy(const std::string& path, const Environment& env) {
  std::ifstream in(path);
  if (!in) throw ConfigError("strategy", "cannot open '" + path + "'");
  try {
    return read_strategy_csv(in, env.types().resolution(), env.bids());
  } catch (const std::invalid_argument& e) {
    throw ConfigError("strategy", e.what());
  }
}

inline SolveResult solve(const Scenario& scn, const Environment& env) {
  const Strategy init = initial_strategy(scn, env);
  if (!is_monotone(init)) {
    throw ConfigError("init", "initial strategy is not monotone for this utility");
  }
  return iterate_best_response(init, init, env, scn.max_iter);
}

inline int bid_tick(double value, const BidGrid& g, const std::string& flag) {
  const double scaled = value * g.increments();
  const long k = std::lround(scaled);
  if (std::abs(scaled - static_cast<double>(k)) > 1e-9 || k < 0 || k > g.top_tick()) {
    throw ConfigError(flag, "bid " + format_double(value) + " is not a grid level");
  }
  return static_cast<int>(k);
}

}  // namespace cli

inline int cli_main(int argc, const char* const* argv, std::ostream& out,
                    std::ostream& err) {
  CLI::App app{"Simultaneous first-price auctions for two complementary objects"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir;

  auto* solve = app.add_subcommand("solve", "iterate greatest best replies from the initial profile");
  solve->add_option("scenario", scenario_path, "scenario file")->required();
  solve->add_option("--out", out_dir, "write strategy_1.csv, strategy_2.csv, solution.csv, summary.csv here");

  int samples = 0;
  auto* verify = app.add_subcommand("verify", "check single crossing, quasi-supermodularity and the H-D table");
  verify->add_option("scenario", scenario_path, "scenario file")->required();
  verify->add_option("--samples", samples, "random monotone opponent strategies (default: sweep_samples)");
  verify->add_option("--out", out_dir, "write hd_table.csv, properties.csv, witnesses.csv here");

  std::uint64_t draws = 100000;
  std::string strategy1, strategy2;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo play of a strategy profile");
  simulate->add_option("scenario", scenario_path, "scenario file")->required();
  simulate->add_option("--draws", draws, "number of simulated auctions")->check(CLI::PositiveNumber);
  simulate->add_option("--strategy1", strategy1, "bidder 1 strategy CSV (default: solve)");
  simulate->add_option("--strategy2", strategy2, "bidder 2 strategy CSV (default: solve)");

  std::uint64_t cap = 100000;
  auto* enumerate = app.add_subcommand("enumerate", "all monotone pure-strategy equilibria of a tiny instance");
  enumerate->add_option("scenario", scenario_path, "scenario file")->required();
  enumerate->add_option("--cap", cap, "maximum monotone strategies per bidder");

  double b1 = 0, b2 = 0, x1 = 0, x2 = 0;
  std::string opponent = "zero";
  bool all_bids = false;
  auto* probe = app.add_subcommand("probe", "winning probabilities and interim utility for one query");
  probe->add_option("scenario", scenario_path, "scenario file")->required();
  probe->add_option("--b1", b1, "bid on object 1");
  probe->add_option("--b2", b2, "bid on object 2");
  probe->add_option("--x1", x1, "value of object 1")->check(CLI::Range(0.0, 1.0));
  probe->add_option("--x2", x2, "value of object 2")->check(CLI::Range(0.0, 1.0));
  probe->add_option("--opponent", opponent,
                    "zero | half_value | truthful | solve | path to a strategy CSV");
  probe->add_flag("--all", all_bids, "dump every bid pair on the lattice");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    const Scenario scn = load_scenario(scenario_path);
    const Environment env = make_environment(scn);
    const BidGrid& g = env.bids();

    if (*solve) {
      const SolveResult r = cli::solve(scn, env);
      if (out_dir.empty()) {
        cli::write_solution_csv(out, r, env);
        out << '\n';
        cli::write_summary_csv(out, r);
      } else {
        const std::filesystem::path dir(out_dir);
        std::filesystem::create_directories(dir);
        cli::write_file(dir / "strategy_1.csv", [&](auto& os) { write_strategy_csv(os, r.s1, g); });
        cli::write_file(dir / "strategy_2.csv", [&](auto& os) { write_strategy_csv(os, r.s2, g); });
        cli::write_file(dir / "solution.csv", [&](auto& os) { cli::write_solution_csv(os, r, env); });
        cli::write_file(dir / "summary.csv", [&](auto& os) { cli::write_summary_csv(os, r); });
        cli::write_summary_csv(out, r);
      }
      return kExitOk;
    }

    if (*verify) {
      const int n_samples = samples > 0 ? samples : scn.sweep_samples;
      const ValidationReport assumptions = validate_assumptions(env.utility());
      const SweepResult sweep = sweep_properties(env, n_samples, scn.seed);
      const HDSummary hd = hd_full_enumeration(g);

      out << "utility: " << env.utility().description() << '\n';
      out << "assumptions: "
          << (assumptions.ok() ? std::string("ok")
                               : std::to_string(assumptions.violations.size()) +
                                     " violations (first: " +
                                     to_string(assumptions.violations.front().assumption) + ")")
          << '\n';
      out << "sweep: samples=" << sweep.samples << " base_seed=" << sweep.base_seed << '\n';
      out << "property,violations\n";
      out << "WSC," << sweep.wsc.violations << '\n';
      out << "WQS," << sweep.wqs.violations << '\n';
      out << "IneqW," << sweep.ineq_w.violations << '\n';
      out << "HD_negative," << hd.negative << '\n';
      out << '\n' << render_hd_table(hd);

      if (!out_dir.empty()) {
        const std::filesystem::path dir(out_dir);
        std::filesystem::create_directories(dir);
        cli::write_file(dir / "hd_table.csv", [&](auto& os) { write_hd_csv(os, hd); });
        cli::write_file(dir / "properties.csv", [&](auto& os) {
          os << "property,samples,base_seed,violations\n";
          for (const auto* p : {&sweep.wsc, &sweep.wqs, &sweep.ineq_w}) {
            const char* name = p == &sweep.wsc ? "WSC" : p == &sweep.wqs ? "WQS" : "IneqW";
            os << name << ',' << sweep.samples << ',' << sweep.base_seed << ','
               << p->violations << '\n';
          }
          os << "HD_negative,,," << hd.negative << '\n';
        });
        cli::write_file(dir / "witnesses.csv", [&](auto& os) {
          os << "property,seed,b1,b2,b1_prime,b2_prime,type,type_prime,v0,v1,v2,v3\n";
          for (const auto* p : {&sweep.wsc, &sweep.wqs, &sweep.ineq_w}) {
            for (const auto& w : p->witnesses) {
              os << to_string(w.property) << ',' << w.seed.value_or(0) << ','
                 << format_double(g.level(w.b.b1)) << ',' << format_double(g.level(w.b.b2)) << ','
                 << format_double(g.level(w.b_prime.b1)) << ','
                 << format_double(g.level(w.b_prime.b2)) << ',' << w.type_index << ','
                 << w.type_index_prime;
              for (double v : w.values) os << ',' << format_double(v);
              os << '\n';
            }
          }
        });
      }
      return sweep.ok() && hd.ok() ? kExitOk : kExitViolation;
    }

    if (*simulate) {
      Strategy s1, s2;
      if (strategy1.empty() || strategy2.empty()) {
        const SolveResult r = cli::solve(scn, env);
        s1 = r.s1;
        s2 = r.s2;
      }
      if (!strategy1.empty()) s1 = cli::load_strategy(strategy1, env);
      if (!strategy2.empty()) s2 = cli::load_strategy(strategy2, env);
      write_stats_csv(out, run_simulation(env, s1, s2, draws, scn.seed));
      return kExitOk;
    }

    if (*enumerate) {
      const ExhaustiveResult r = exhaustive_equilibria(env, cap);
      out << "profile,bidder,x1_index,x2_index,b1,b2\n";
      for (std::size_t p = 0; p < r.equilibria.size(); ++p) {
        for (int bidder = 0; bidder < 2; ++bidder) {
          const Strategy& s = bidder == 0 ? r.equilibria[p].first : r.equilibria[p].second;
          for (int k = 0; k < s.size(); ++k) {
            const auto [i, j] = env.types().coords(k);
            out << p << ',' << bidder + 1 << ',' << i << ',' << j << ','
                << format_double(g.level(s[k].b1)) << ',' << format_double(g.level(s[k].b2))
                << '\n';
          }
        }
      }
      out << "\nstrategies,equilibria,truncated\n"
          << r.strategies << ',' << r.equilibria.size() << ',' << (r.truncated ? 1 : 0) << '\n';
      return kExitOk;
    }

    if (*probe) {
      Strategy opp;
      if (opponent == "zero") {
        opp = Strategy::constant(env.types().resolution(), {0, 0});
      } else if (opponent == "half_value") {
        opp = half_value_strategy(env.types(), g, env.utility());
      } else if (opponent == "truthful") {
        opp = truthful_strategy(env.types(), g, env.utility());
      } else if (opponent == "solve") {
        opp = cli::solve(scn, env).s2;
      } else {
        opp = cli::load_strategy(opponent, env);
      }
      const BidDistribution mu = env.induced(opp);
      const TypePoint x{x1, x2};
      out << "b1,b2,q1,q2,q3,p1,p2,p3,V\n";
      auto row = [&](const BidPair& b) {
        const WinProbs w = win_probs(mu, b);
        out << format_double(g.level(b.b1)) << ',' << format_double(g.level(b.b2)) << ','
            << format_double(w.q1) << ',' << format_double(w.q2) << ','
            << format_double(w.p3) << ',' << format_double(w.p1) << ','
            << format_double(w.p2) << ',' << format_double(w.p3) << ','
            << format_double(interim_utility(b, x, mu, env.utility())) << '\n';
      };
      if (all_bids) {
        for (int k = 0; k < g.num_pairs(); ++k) row(g.pair_at(k));
      } else {
        row({cli::bid_tick(b1, g, "--b1"), cli::bid_tick(b2, g, "--b2")});
      }
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SelectionError& e) {
    err << "selection failure: " << e.what() << '\n';
    return kExitViolation;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace simauc
