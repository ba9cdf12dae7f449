// Acceptance gate: ten end-to-end checks, each printed as one pass/fail line.
// Exit status is the number of failed checks.  Where a check carries a time
// budget, exceeding it fails the check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "riskgame/conditional.hpp"
#include "riskgame/equilibrium.hpp"
#include "riskgame/io.hpp"
#include "riskgame/reference_game.hpp"
#include "riskgame/rng.hpp"
#include "riskgame/risk.hpp"

using namespace riskgame;

namespace {

int failures = 0;

// Runs one check, prints its line, accumulates failures.  A zero budget
// means the check has no time limit.
void criterion(int id, const std::string& text, double budget_ms,
               const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool ok = false;
  double ms = 0;
  try {
    auto t0 = std::chrono::steady_clock::now();
    ok = body(detail);
    auto t1 = std::chrono::steady_clock::now();
    ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    if (budget_ms > 0 && ms > budget_ms) {
      ok = false;
      detail = "exceeded " + std::to_string(budget_ms) + " ms";
    }
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  if (!ok) ++failures;
  std::ostringstream line;
  line << "[" << std::setw(2) << id << "] " << (ok ? "PASS" : "FAIL") << "  "
       << text << "  (" << std::fixed << std::setprecision(2) << ms << " ms)";
  if (!ok && !detail.empty()) line << "  -- " << detail;
  std::cout << line.str() << "\n";
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

RandomLoss uniform_loss(std::vector<double> values) {
  Index n = values.size();
  return RandomLoss{std::move(values),
                    std::vector<double>(n, 1.0 / static_cast<double>(n))};
}

const DeviationRecord& record_of(const EquilibriumCertificate& cert,
                                 Index player, Index own_type) {
  for (const auto& r : cert.records)
    if (r.player == player && r.own_type == own_type) return r;
  throw std::runtime_error("certificate record not found");
}

// A random two-player game with the given type/action ranges, full-support
// prior, and losses drawn uniformly from [0, 10).
Game random_game(Rng& rng, Index max_types, Index max_actions,
                 bool integer_losses) {
  static const std::vector<std::string> kTypeNames{"a", "b", "c"};
  static const std::vector<std::string> kActNames{"x", "y", "z"};
  std::vector<std::vector<std::string>> types, actions;
  Index num_profiles = 1, num_actions = 1;
  for (Index i = 0; i < 2; ++i) {
    Index nt = 1 + rng.below(max_types);
    Index na = 2 + rng.below(max_actions - 1);
    types.push_back({kTypeNames.begin(), kTypeNames.begin() + nt});
    actions.push_back({kActNames.begin(), kActNames.begin() + na});
    num_profiles *= nt;
    num_actions *= na;
  }
  std::vector<double> prior = rng.simplex(num_profiles);
  for (auto& p : prior)
    p = 0.2 / static_cast<double>(num_profiles) + 0.8 * p;
  double total = 0;
  for (double p : prior) total += p;
  for (auto& p : prior) p /= total;
  std::vector<std::vector<double>> losses(2);
  for (auto& table : losses)
    for (Index k = 0; k < num_profiles * num_actions; ++k)
      table.push_back(integer_losses ? std::floor(rng.uniform(0.0, 10.0))
                                     : rng.uniform(0.0, 10.0));
  return Game::make({"1", "2"}, std::move(types), std::move(actions),
                    std::move(prior), std::move(losses));
}

std::vector<std::vector<Index>> random_pure(Rng& rng, const Game& game) {
  std::vector<std::vector<Index>> actions;
  for (Index i = 0; i < game.num_players(); ++i) {
    std::vector<Index> per;
    for (Index t = 0; t < game.types[i].size(); ++t)
      per.push_back(rng.below(game.actions[i].size()));
    actions.push_back(std::move(per));
  }
  return actions;
}

}  // namespace

int main() {
  criterion(
      1,
      "ex ante tail-average risks of the recorded profiles reproduce exactly "
      "and match their one-decimal display",
      1.0, [](std::string& detail) {
        RiskMeasureSpec spec = RiskMeasureSpec::avar_rational(1, 3);
        RandomLoss l1 = uniform_loss({52, 59, 28, 7});
        RandomLoss l2 = uniform_loss({52, 11, 28, 0});
        evaluate(spec, l1);  // warm up before the timed budget applies
        double v1 = evaluate(spec, l1);
        double v2 = evaluate(spec, l2);
        bool ok = close(v1, 48.625, 1e-9) && close(v2, 32.75, 1e-9) &&
                  close(v1, 48.6, 0.06) && close(v2, 32.7, 0.06) &&
                  format_one_decimal(v1) == "48.6" &&
                  format_one_decimal(v2) == "32.7";
        if (!ok)
          detail = "got " + std::to_string(v1) + ", " + std::to_string(v2);
        return ok;
      });

  criterion(
      2,
      "optimal dual densities match the recorded densities exactly, and the "
      "recorded alternative density certifies optimal",
      1.0, [](std::string& detail) {
        RiskMeasureSpec spec = RiskMeasureSpec::avar_rational(1, 3);
        RandomLoss a = uniform_loss({59, 11, 59, 7});
        optimal_dual(spec, a);  // warm up
        DualDensity d = optimal_dual(spec, a);
        bool exact = d.values == std::vector<double>{1.5, 1.0, 1.5, 0.0};
        RandomLoss b = uniform_loss({11, 59, 11, 60});
        DualDensity pick{{0.0, 1.5, 1.0, 1.5}};
        bool picked = is_dual_feasible(spec, b.probs, pick) &&
                      is_dual_optimal(spec, b, pick);
        if (!exact) detail = "canonical density differs";
        if (!picked) detail += " alternative density not optimal";
        return exact && picked;
      });

  criterion(
      3,
      "projecting the recorded dual yields cell weights 5/4 and 3/4 with "
      "revised tail levels exactly 1/6 and 1/2",
      0, [](std::string& detail) {
        Game g = reference_game();
        InformationPartition part = InformationPartition::of_player(g, 0);
        ConditionalDual cond =
            project_dual(DualDensity{{1.5, 1.0, 1.5, 0.0}}, part, g.prior);
        RiskMeasureSpec spec = RiskMeasureSpec::avar_rational(1, 3);
        bool weights =
            cond.weights == std::vector<double>{1.25, 0.75};
        double lG = revised_level(spec, cond.weights[0]);
        double lH = revised_level(spec, cond.weights[1]);
        bool levels = lG == 1.0 / 6.0 && lH == 0.5;
        RevisedInterimMeasure mG = revise_interim(spec, cond, 0);
        RevisedInterimMeasure mH = revise_interim(spec, cond, 1);
        bool interim = mG.has_revised_level && mG.revised_alpha == 1.0 / 6.0 &&
                       mH.has_revised_level && mH.revised_alpha == 0.5;
        if (!(weights && levels && interim))
          detail = "weights (" + std::to_string(cond.weights[0]) + ", " +
                   std::to_string(cond.weights[1]) + "), levels (" +
                   std::to_string(lG) + ", " + std::to_string(lH) + ")";
        return weights && levels && interim;
      });

  criterion(
      4,
      "the bundled game's stable sets and interim certificates match the "
      "recorded analysis, and its reconstruction from quoted anchors is "
      "feasible",
      1000.0, [](std::string& detail) {
        ReconstructionReport rec = reconstruct_reference_game();
        if (!rec.feasible) {
          detail = "reconstruction infeasible";
          return false;
        }
        Game g = load_game(default_data_dir() + "/two_player_gh.json");
        std::vector<RiskMeasureSpec> specs(2,
                                           RiskMeasureSpec::avar_rational(1, 3));
        std::set<std::string> stable;
        for (const auto& r : solve_rane_pure(g, specs))
          if (r.pure_equilibrium) stable.insert(r.label);
        if (stable != std::set<std::string>{"(DD,ss)", "(DS,ds)", "(SS,dd)"}) {
          detail = "stable set differs";
          return false;
        }

        StrategyProfile ddss =
            StrategyProfile::pure(g, parse_profile_label(g, "(DD,ss)"));
        EquilibriumCertificate cert = check_rabne(g, specs, ddss);
        if (!cert.equilibrium) {
          detail = "(DD,ss) not interim stable";
          return false;
        }
        // Four recorded interim comparisons, one per (player, type): the
        // incumbent action against the alternative action of that cell.  One
        // alternative was recorded at the revised tail level 1/6 rather than
        // the unrevised level; it is reproduced that way.
        struct Cmp {
          Index player, type, alt_action;
          double incumbent, deviation;
          bool deviation_at_revised_level;
        };
        const std::vector<Cmp> cmps{{0, 0, 0, 11.0, 42.4, true},
                                    {0, 1, 0, 8.3, 22.8, false},
                                    {1, 0, 1, 57.3, 59.0, false},
                                    {1, 1, 1, 46.0, 60.0, false}};
        for (const auto& c : cmps) {
          const DeviationRecord& r = record_of(cert, c.player, c.type);
          StrategyProfile alt = ddss;
          alt.strategies[c.player] = BehavioralStrategy::pure(
              g, c.player,
              std::vector<Index>(g.types[c.player].size(), c.alt_action));
          RandomLoss cell = restrict_loss(
              average_loss(g, alt, c.player),
              InformationPartition::of_player(g, c.player), c.type);
          double dev = evaluate(c.deviation_at_revised_level
                                    ? RiskMeasureSpec::avar_rational(1, 6)
                                    : specs[c.player],
                                cell);
          if (!close(r.incumbent, c.incumbent, 0.06) ||
              !close(dev, c.deviation, 0.06) || !(r.incumbent < dev)) {
            detail = "comparison at player " + std::to_string(c.player) +
                     " type " + std::to_string(c.type) + " got " +
                     std::to_string(r.incumbent) + " vs " + std::to_string(dev);
            return false;
          }
        }

        StrategyProfile dsds =
            StrategyProfile::pure(g, parse_profile_label(g, "(DS,ds)"));
        if (check_rabne(g, specs, dsds).equilibrium) {
          detail = "(DS,ds) unexpectedly interim stable without revision";
          return false;
        }
        RevisionProfile own = build_revision(g, specs, dsds);
        if (!check_rrbne(g, own, dsds).equilibrium) {
          detail = "(DS,ds) not stable under its own revision";
          return false;
        }
        StrategyProfile ddsd =
            StrategyProfile::pure(g, parse_profile_label(g, "(DD,sd)"));
        RevisionProfile alt = build_revision(
            g, specs, ddsd,
            {DualDensity{{0.0, 1.5, 1.0, 1.5}}, std::nullopt});
        if (check_rrbne(g, alt, dsds).equilibrium) {
          detail = "(DS,ds) unexpectedly stable under the foreign revision";
          return false;
        }
        return true;
      });

  criterion(
      5,
      "projected optimal duals reconstruct the ex ante risk as a weighted "
      "interim average, and sampled feasible projections never exceed it "
      "(500 random instances)",
      10000.0, [](std::string& detail) {
        Rng rng(11);
        const std::vector<std::pair<long long, long long>> levels{
            {0, 1}, {1, 4}, {1, 3}, {1, 2}, {2, 3}, {3, 4}};
        double worst = 0;
        for (int k = 0; k < 500; ++k) {
          Game g = random_game(rng, 3, 3, true);
          auto [num, den] = levels[rng.below(levels.size())];
          RiskMeasureSpec spec = RiskMeasureSpec::avar_rational(num, den);
          Index player = rng.below(2);
          StrategyProfile prof = StrategyProfile::pure(g, random_pure(rng, g));
          DecompositionReport d = verify_decomposition(
              spec, average_loss(g, prof, player),
              InformationPartition::of_player(g, player), 200,
              1000 + static_cast<std::uint64_t>(k));
          worst = std::max({worst, std::abs(d.gap),
                            d.max_sampled - d.ex_ante});
          if (std::abs(d.gap) > 1e-9 || d.max_sampled > d.ex_ante + 1e-9) {
            detail = "instance " + std::to_string(k) + " gap " +
                     std::to_string(d.gap);
            return false;
          }
        }
        return true;
      });

  criterion(
      6,
      "tail averages at levels 0, 1/4, 1/3, 1/2, 3/4, 1 pass every coherence "
      "axiom on 1000 random losses each",
      5000.0, [](std::string& detail) {
        const std::vector<std::pair<long long, long long>> levels{
            {0, 1}, {1, 4}, {1, 3}, {1, 2}, {3, 4}, {1, 1}};
        for (auto [num, den] : levels) {
          CoherenceReport rep = check_coherence(
              RiskMeasureSpec::avar_rational(num, den), 1000,
              90 + static_cast<std::uint64_t>(num * 10 + den));
          if (!rep.passed()) {
            detail = "level " + std::to_string(num) + "/" +
                     std::to_string(den) + ": " + rep.counterexample;
            return false;
          }
        }
        return true;
      });

  criterion(
      7,
      "evaluation matches the dual-vertex brute-force maximum on 10000 small "
      "uniform losses",
      0, [](std::string& detail) {
        Rng rng(23);
        for (int k = 0; k < 10000; ++k) {
          Index n = 1 + rng.below(6);
          std::vector<double> values;
          for (Index j = 0; j < n; ++j)
            values.push_back(std::floor(rng.uniform(0.0, 10.0)));
          RandomLoss loss = uniform_loss(values);
          double alpha = k % 5 == 0 ? 0.0 : rng.u01();
          double got = evaluate(RiskMeasureSpec::avar(alpha), loss);
          double want =
              oracles::tail_average_oracle(1.0 - alpha, loss.values,
                                           loss.probs);
          if (!close(got, want, 1e-9)) {
            detail = "instance " + std::to_string(k) + " got " +
                     std::to_string(got) + " want " + std::to_string(want);
            return false;
          }
        }
        return true;
      });

  criterion(
      8,
      "on 100 seeded random games, every profile interim-stable under its own "
      "revision (hedged deviations included) is ex ante stable",
      30000.0, [](std::string& detail) {
        Rng rng(17);
        const std::vector<std::pair<long long, long long>> levels{
            {1, 4}, {1, 3}, {1, 2}, {2, 3}};
        int applicable = 0;
        for (int k = 0; k < 100; ++k) {
          Game g = random_game(rng, 2, 2, false);
          std::vector<RiskMeasureSpec> specs;
          for (Index i = 0; i < 2; ++i) {
            auto [num, den] = levels[rng.below(levels.size())];
            specs.push_back(RiskMeasureSpec::avar_rational(num, den));
          }
          for (const auto& rec : solve_rane_pure(g, specs)) {
            StrategyProfile prof = StrategyProfile::pure(g, rec.actions);
            ImplicationReport rep =
                verify_rrbne_implies_rane(g, specs, prof);
            if (rep.applicable) ++applicable;
            if (!rep.implication_ok) {
              detail = "violation in game " + std::to_string(k) + " at " +
                       rec.label;
              return false;
            }
          }
        }
        if (applicable == 0) {
          detail = "no profile ever satisfied the hypothesis";
          return false;
        }
        return true;
      });

  criterion(
      9,
      "with expectation preferences, ex ante, interim, and revised-interim "
      "stability agree on every pure profile of 100 random games",
      0, [](std::string& detail) {
        Rng rng(29);
        for (int k = 0; k < 100; ++k) {
          Game g = random_game(rng, 2, 2, false);
          std::vector<RiskMeasureSpec> specs(
              2, RiskMeasureSpec::expectation());
          for (const auto& rec : solve_rane_pure(g, specs)) {
            StrategyProfile prof = StrategyProfile::pure(g, rec.actions);
            bool ex = rec.certificate.equilibrium;
            bool interim = check_rabne(g, specs, prof).equilibrium;
            bool revised =
                check_rrbne(g, unrevised_revision(g, specs, prof), prof)
                    .equilibrium;
            if (ex != interim || interim != revised) {
              detail = "certificates disagree in game " + std::to_string(k) +
                       " at " + rec.label;
              return false;
            }
          }
        }
        return true;
      });

  criterion(
      10,
      "beliefs from 100 random full-support priors certify consistent with a "
      "witness reproducing them, and a contradictory system certifies "
      "inconsistent",
      0, [](std::string& detail) {
        Rng rng(31);
        for (int k = 0; k < 100; ++k) {
          Game g = random_game(rng, 3, 2, false);
          BeliefSystem bs = beliefs_from_prior(g);
          ConsistencyReport cons = check_belief_consistency(bs);
          if (!cons.consistent) {
            detail = "game " + std::to_string(k) + " certified inconsistent";
            return false;
          }
          for (Index i = 0; i < g.num_players(); ++i) {
            InformationPartition part = InformationPartition::of_player(g, i);
            for (Index ti = 0; ti < g.types[i].size(); ++ti) {
              const auto& cell = part.cells[ti];
              double mass = 0;
              for (Index t : cell) mass += cons.prior[t];
              for (Index j = 0; j < cell.size(); ++j) {
                double b = cons.prior[cell[j]] / mass;
                if (!close(b, bs.beliefs[i][ti][j], 1e-8)) {
                  detail = "witness drifts from the beliefs in game " +
                           std::to_string(k);
                  return false;
                }
              }
            }
          }
        }
        BeliefSystem bad;
        bad.type_counts = {2, 2};
        bad.beliefs = {{{0.5, 0.5}, {0.5, 0.5}},
                       {{0.5, 0.5}, {0.9, 0.1}}};
        if (check_belief_consistency(bad).consistent) {
          detail = "contradictory system certified consistent";
          return false;
        }
        return true;
      });

  std::cout << (failures == 0 ? "ALL CRITERIA PASSED"
                              : std::to_string(failures) + " CRITERIA FAILED")
            << "\n";
  return failures;
}
