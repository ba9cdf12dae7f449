#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "riskgame/game.hpp"
#include "riskgame/reference_game.hpp"
#include "riskgame/rng.hpp"

using namespace riskgame;

namespace {

Game tiny_game(std::vector<double> prior) {
  // Two players, two types and two actions each; losses just count indices
  // so every entry is distinct.
  std::vector<double> l(16);
  for (Index k = 0; k < 16; ++k) l[k] = static_cast<double>(k);
  return Game::make({"a", "b"}, {{"t0", "t1"}, {"u0", "u1"}},
                    {{"x", "y"}, {"p", "q"}}, std::move(prior), {l, l});
}

}  // namespace

TEST_CASE("profile space indexing") {
  ProfileSpace sp({2, 3});
  CHECK(sp.total == 6);
  for (Index f = 0; f < 6; ++f) {
    auto c = sp.unflatten(f);
    CHECK(sp.flatten(c) == f);
    CHECK(sp.coordinate(f, 0) == c[0]);
    CHECK(sp.coordinate(f, 1) == c[1]);
  }
  CHECK(sp.flatten({1, 2}) == 5);
  CHECK(sp.replace(5, 1, 0) == 3);
  CHECK(sp.replace(0, 0, 1) == 3);
}

TEST_CASE("validation rejects malformed games") {
  CHECK_THROWS_AS(tiny_game({0.25, 0.25, 0.25, 0.24}), InputError);
  CHECK_THROWS_AS(tiny_game({0.5, 0.5, 0.25, -0.25}), InputError);
  CHECK_THROWS_AS(tiny_game({0.5, 0.5}), InputError);
  std::vector<double> l(15);
  CHECK_THROWS_AS(Game::make({"a", "b"}, {{"t0", "t1"}, {"u0", "u1"}},
                             {{"x", "y"}, {"p", "q"}},
                             {0.25, 0.25, 0.25, 0.25}, {l, l}),
                  InputError);
}

TEST_CASE("support flags") {
  CHECK(tiny_game({0.25, 0.25, 0.25, 0.25}).fully_supported());
  CHECK_FALSE(tiny_game({0.5, 0.5, 0.0, 0.0}).fully_supported());
}

TEST_CASE("average loss of pure profiles reads the table") {
  Game g = reference_game();
  // (DS,ds): player 1 plays D as G and S as H; player 2 plays d as G, s as H.
  StrategyProfile p = StrategyProfile::pure(g, {{1, 0}, {1, 0}});
  RandomLoss l1 = average_loss(g, p, 0);
  CHECK(l1.values == std::vector<double>{59, 11, 59, 7});
  CHECK(l1.probs == g.prior);

  // (SS,sd): both types S; player 2 plays s as G, d as H.
  StrategyProfile q = StrategyProfile::pure(g, {{0, 0}, {0, 1}});
  CHECK(average_loss(g, q, 0).values == std::vector<double>{52, 59, 28, 7});
  CHECK(average_loss(g, q, 1).values == std::vector<double>{52, 11, 28, 0});
}

TEST_CASE("average loss is linear in one player's strategy") {
  Rng rng(91);
  Game g = tiny_game({0.1, 0.2, 0.3, 0.4});
  for (int rep = 0; rep < 25; ++rep) {
    auto rand_strategy = [&](Index owner) {
      std::vector<std::vector<double>> rows;
      for (Index t = 0; t < 2; ++t) rows.push_back(rng.simplex(2));
      return BehavioralStrategy::make(g, owner, rows);
    };
    BehavioralStrategy b1 = rand_strategy(0), b2 = rand_strategy(0);
    BehavioralStrategy opp = rand_strategy(1);
    double lam = rng.u01();
    std::vector<std::vector<double>> mixed_rows;
    for (Index t = 0; t < 2; ++t) {
      std::vector<double> row(2);
      for (Index a = 0; a < 2; ++a)
        row[a] = lam * b1.rows[t][a] + (1 - lam) * b2.rows[t][a];
      mixed_rows.push_back(row);
    }
    BehavioralStrategy mix = BehavioralStrategy::make(g, 0, mixed_rows);
    for (Index player : {Index{0}, Index{1}}) {
      RandomLoss lm = average_loss(g, StrategyProfile::make(g, {mix, opp}), player);
      RandomLoss la = average_loss(g, StrategyProfile::make(g, {b1, opp}), player);
      RandomLoss lb = average_loss(g, StrategyProfile::make(g, {b2, opp}), player);
      for (Index t = 0; t < 4; ++t)
        CHECK(lm.values[t] ==
              doctest::Approx(lam * la.values[t] + (1 - lam) * lb.values[t])
                  .epsilon(1e-12));
    }
  }
}

TEST_CASE("conditional distributions") {
  Game uniform = reference_game();
  CHECK(conditional_distribution(uniform, 0, 0) ==
        std::vector<double>{0.5, 0.5});

  Game skew = tiny_game({0.1, 0.2, 0.3, 0.4});
  auto c = conditional_distribution(skew, 0, 1);
  CHECK(c[0] == doctest::Approx(3.0 / 7.0).epsilon(1e-12));
  CHECK(c[1] == doctest::Approx(4.0 / 7.0).epsilon(1e-12));

  // A product prior conditions to its opponent marginal.
  Game prod = tiny_game({0.12, 0.18, 0.28, 0.42});  // (0.3,0.7) x (0.4,0.6)
  for (Index t : {Index{0}, Index{1}}) {
    auto cc = conditional_distribution(prod, 0, t);
    CHECK(cc[0] == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(cc[1] == doctest::Approx(0.6).epsilon(1e-12));
  }

  Game degenerate = tiny_game({0.5, 0.5, 0.0, 0.0});
  CHECK_THROWS_WITH_AS(conditional_distribution(degenerate, 0, 1),
                       doctest::Contains("unconditionable"), InputError);
}

TEST_CASE("law of total probability reassembles the prior") {
  Game g = tiny_game({0.15, 0.25, 0.35, 0.25});
  for (Index player : {Index{0}, Index{1}}) {
    std::vector<double> rebuilt(4, 0.0);
    InformationPartition part = InformationPartition::of_player(g, player);
    for (Index t = 0; t < 2; ++t) {
      double mass = g.type_mass(player, t);
      auto cond = conditional_distribution(g, player, t);
      for (Index k = 0; k < part.cells[t].size(); ++k)
        rebuilt[part.cells[t][k]] = mass * cond[k];
    }
    for (Index i = 0; i < 4; ++i)
      CHECK(rebuilt[i] == doctest::Approx(g.prior[i]).epsilon(1e-12));
  }
}

TEST_CASE("partition cells are disjoint and cover") {
  Game g = reference_game();
  for (Index player : {Index{0}, Index{1}}) {
    InformationPartition part = InformationPartition::of_player(g, player);
    std::vector<int> seen(g.num_type_profiles(), 0);
    for (Index t = 0; t < part.cells.size(); ++t)
      for (Index f : part.cells[t]) {
        ++seen[f];
        CHECK(g.type_space.coordinate(f, player) == t);
      }
    for (int s : seen) CHECK(s == 1);
  }
}

TEST_CASE("restrict_loss conditions and optionally merges") {
  Game g = reference_game();
  InformationPartition p1 = InformationPartition::of_player(g, 0);
  RandomLoss loss{{59, 11, 59, 7}, g.prior};
  RandomLoss cell = restrict_loss(loss, p1, 1);
  CHECK(cell.values == std::vector<double>{59, 7});
  CHECK(cell.probs == std::vector<double>{0.5, 0.5});

  RandomLoss constant{{3, 3, 3, 3}, g.prior};
  RandomLoss merged = restrict_loss(constant, p1, 0, true);
  CHECK(merged.values == std::vector<double>{3});
  CHECK(merged.probs == std::vector<double>{1.0});

  RandomLoss g_cell = restrict_loss(RandomLoss{{52, 59, 28, 7}, g.prior}, p1, 0);
  CHECK(g_cell.values == std::vector<double>{52, 59});

  // Cell probabilities agree with the conditional type distribution.
  Game skew = tiny_game({0.1, 0.2, 0.3, 0.4});
  InformationPartition sp = InformationPartition::of_player(skew, 0);
  RandomLoss sloss{{1, 2, 3, 4}, skew.prior};
  RandomLoss scell = restrict_loss(sloss, sp, 1);
  auto cond = conditional_distribution(skew, 0, 1);
  for (Index k = 0; k < 2; ++k)
    CHECK(scell.probs[k] == doctest::Approx(cond[k]).epsilon(1e-12));

  Game degenerate = tiny_game({0.5, 0.5, 0.0, 0.0});
  InformationPartition dp = InformationPartition::of_player(degenerate, 0);
  CHECK_THROWS_AS(restrict_loss(RandomLoss{{1, 2, 3, 4}, degenerate.prior}, dp, 1),
                  InputError);
}
