#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "riskgame/lp.hpp"
#include "riskgame/risk.hpp"
#include "riskgame/rng.hpp"

using namespace riskgame;
using riskgame::lp::LinearProgram;
using riskgame::lp::Rel;
using riskgame::lp::Sense;
using riskgame::lp::Solution;
using riskgame::lp::Status;
using riskgame::lp::solve;

namespace {

RandomLoss uniform4(std::vector<double> v) {
  return RandomLoss{std::move(v), {0.25, 0.25, 0.25, 0.25}};
}

RandomLoss random_loss(Rng& rng, Index max_atoms = 6) {
  Index n = 1 + rng.below(max_atoms);
  RandomLoss loss;
  for (Index i = 0; i < n; ++i) loss.values.push_back(rng.uniform(-20, 20));
  loss.probs = rng.simplex(n);
  return loss;
}

// Independent check of evaluate: maximize E[L Z] over the dual box with the
// cautious-simplex solver instead of the greedy fill.
double tail_average_by_lp(double cap, const RandomLoss& loss) {
  LinearProgram lp;
  lp.sense = Sense::Maximize;
  for (Index i = 0; i < loss.size(); ++i)
    lp.add_variable(loss.probs[i] * loss.values[i], 0.0, cap);
  std::vector<std::pair<Index, double>> budget;
  for (Index i = 0; i < loss.size(); ++i) budget.push_back({i, loss.probs[i]});
  lp.add_row(budget, Rel::Eq, 1.0);
  Solution s = solve(lp);
  REQUIRE(s.status == Status::Optimal);
  return s.objective;
}

}  // namespace

TEST_CASE("tail averages on the benchmark losses") {
  RiskMeasureSpec third = RiskMeasureSpec::avar_rational(1, 3);
  CHECK(evaluate(third, uniform4({52, 59, 28, 7})) == 48.625);
  CHECK(evaluate(third, uniform4({52, 11, 28, 0})) == 32.75);
  CHECK(evaluate(third, uniform4({59, 11, 59, 7})) == 47.0);
  CHECK(evaluate(third, uniform4({11, 11, 11, 0})) == 11.0);
  CHECK(evaluate(third, uniform4({52, 59, 59, 7})) == doctest::Approx(57.25));

  // Two-point cells at the revised levels: worst 5/6 and worst 1/2 mass.
  RandomLoss cell_g{{59, 11}, {0.5, 0.5}};
  RandomLoss cell_h{{59, 7}, {0.5, 0.5}};
  CHECK(evaluate(RiskMeasureSpec::avar_rational(1, 6), cell_g) ==
        doctest::Approx(39.8).epsilon(1e-12));
  CHECK(evaluate(RiskMeasureSpec::avar_rational(1, 2), cell_h) == 59.0);
  CHECK(evaluate(RiskMeasureSpec::avar_rational(1, 6), RandomLoss{{52, 28}, {0.5, 0.5}}) ==
        doctest::Approx(42.4).epsilon(1e-12));
  CHECK(evaluate(third, RandomLoss{{52, 28}, {0.5, 0.5}}) == 46.0);
}

TEST_CASE("degenerate levels and constants") {
  RandomLoss l = uniform4({5, -3, 9, 1});
  CHECK(evaluate(RiskMeasureSpec::avar(0.0), l) == doctest::Approx(3.0));
  CHECK(evaluate(RiskMeasureSpec::expectation(), l) == doctest::Approx(3.0));
  CHECK(evaluate(RiskMeasureSpec::avar_rational(1, 1), l) == 9.0);
  CHECK(evaluate(RiskMeasureSpec::esssup(), l) == 9.0);
  // Atoms with zero probability never count towards the supremum.
  CHECK(evaluate(RiskMeasureSpec::esssup(),
                 RandomLoss{{100, 2, 1}, {0.0, 0.5, 0.5}}) == 2.0);

  RandomLoss c{{4, 4, 4}, {0.2, 0.3, 0.5}};
  for (auto spec :
       {RiskMeasureSpec::expectation(), RiskMeasureSpec::avar(0.37),
        RiskMeasureSpec::esssup(),
        RiskMeasureSpec::spectral({{0.5, 0.0}, {0.5, 0.75}})})
    CHECK(evaluate(spec, c) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("tail average grows with the level") {
  Rng rng(1234);
  for (int rep = 0; rep < 50; ++rep) {
    RandomLoss l = random_loss(rng);
    double prev = evaluate(RiskMeasureSpec::avar(0.0), l);
    for (double a : {0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) {
      double cur = evaluate(RiskMeasureSpec::avar(a), l);
      CHECK(cur >= prev - 1e-9);
      prev = cur;
    }
    CHECK(prev == doctest::Approx(oracles::esssup_oracle(l.values, l.probs)));
  }
}

TEST_CASE("greedy densities on the benchmark losses are exact") {
  RiskMeasureSpec third = RiskMeasureSpec::avar_rational(1, 3);
  DualDensity z = optimal_dual(third, uniform4({59, 11, 59, 7}));
  CHECK(z.values == std::vector<double>{1.5, 1.0, 1.5, 0.0});
  CHECK(optimal_dual(third, uniform4({11, 59, 7, 59})).values ==
        std::vector<double>{1.0, 1.5, 0.0, 1.5});
  CHECK(optimal_dual(third, uniform4({7, 59, 11, 59})).values ==
        std::vector<double>{0.0, 1.5, 1.0, 1.5});
  // All-equal losses fill the cap in index order.
  CHECK(optimal_dual(third, uniform4({5, 5, 5, 5})).values ==
        std::vector<double>{1.5, 1.5, 1.0, 0.0});
  // Expectation admits only the unit density.
  CHECK(optimal_dual(RiskMeasureSpec::expectation(), uniform4({1, 2, 3, 4}))
            .values == std::vector<double>(4, 1.0));
  // The essential-sup density concentrates on a worst atom.
  CHECK(optimal_dual(RiskMeasureSpec::esssup(), uniform4({7, 59, 11, 59}))
            .values == std::vector<double>{0.0, 4.0, 0.0, 0.0});
}

TEST_CASE("density feasibility and optimality checks") {
  RiskMeasureSpec third = RiskMeasureSpec::avar_rational(1, 3);
  std::vector<double> p{0.25, 0.25, 0.25, 0.25};
  RandomLoss l = uniform4({59, 11, 59, 7});

  CHECK(is_dual_feasible(third, p, DualDensity{{1.5, 1.0, 1.5, 0.0}}));
  CHECK(is_dual_feasible(third, p, DualDensity{{1, 1, 1, 1}}));
  CHECK(is_dual_feasible(third, p, DualDensity{{0, 1.5, 1, 1.5}}));
  // Over the cap, negative, or off-budget densities are rejected.
  CHECK_FALSE(is_dual_feasible(third, p, DualDensity{{2, 0, 1, 1}}));
  CHECK_FALSE(is_dual_feasible(third, p, DualDensity{{1.5, -0.5, 1.5, 1.5}}));
  CHECK_FALSE(is_dual_feasible(third, p, DualDensity{{1.5, 1.5, 1.5, 0}}));

  CHECK(is_dual_optimal(third, l, DualDensity{{1.5, 1.0, 1.5, 0.0}}));
  // With a tie at the tail boundary, any split of the leftover budget
  // between the tied atoms stays optimal.
  RandomLoss tied = uniform4({59, 11, 59, 11});
  CHECK(is_dual_optimal(third, tied, DualDensity{{1.5, 0.5, 1.5, 0.5}}));
  CHECK(is_dual_optimal(third, tied, DualDensity{{1.5, 0.0, 1.5, 1.0}}));
  // Feasible but not worst-case: the unit density only reaches the mean.
  CHECK_FALSE(is_dual_optimal(third, l, DualDensity{{1, 1, 1, 1}}));
  CHECK_FALSE(is_dual_optimal(third, l, DualDensity{{2, 0, 1, 1}}));
}

TEST_CASE("greedy density is always feasible and optimal") {
  Rng rng(77);
  std::vector<RiskMeasureSpec> specs = {
      RiskMeasureSpec::expectation(),
      RiskMeasureSpec::avar_rational(1, 3),
      RiskMeasureSpec::avar(0.62),
      RiskMeasureSpec::esssup(),
      RiskMeasureSpec::spectral({{0.25, 0.0}, {0.5, 1.0 / 3.0}, {0.25, 0.9}}),
  };
  for (int rep = 0; rep < 200; ++rep) {
    RandomLoss l = random_loss(rng);
    for (const auto& spec : specs) {
      DualDensity z = optimal_dual(spec, l);
      CHECK(is_dual_feasible(spec, l.probs, z));
      CHECK(is_dual_optimal(spec, l, z));
      double attained = 0;
      for (Index i = 0; i < l.size(); ++i)
        attained += l.probs[i] * z.values[i] * l.values[i];
      CHECK(attained == doctest::Approx(evaluate(spec, l)).epsilon(1e-9));
    }
  }
}

TEST_CASE("sort-and-fill agrees with vertex enumeration") {
  Rng rng(2025);
  for (int rep = 0; rep < 500; ++rep) {
    RandomLoss l = random_loss(rng);
    double tail = rng.u01();
    double lib = evaluate(RiskMeasureSpec::avar(1 - tail), l);
    double ref = oracles::tail_average_oracle(tail, l.values, l.probs);
    CHECK(lib == doctest::Approx(ref).epsilon(1e-9));
  }
}

TEST_CASE("sort-and-fill agrees with the simplex solver") {
  Rng rng(4242);
  for (int rep = 0; rep < 100; ++rep) {
    RandomLoss l = random_loss(rng);
    double alpha = rng.uniform(0.0, 0.95);
    RiskMeasureSpec spec = RiskMeasureSpec::avar(alpha);
    double lib = evaluate(spec, l);
    double lp = tail_average_by_lp(spec.cap(), l);
    CHECK(lib == doctest::Approx(lp).epsilon(1e-7));
  }
}

TEST_CASE("coherence audit passes for the shipped measures") {
  for (auto spec :
       {RiskMeasureSpec::expectation(), RiskMeasureSpec::avar_rational(1, 3),
        RiskMeasureSpec::esssup(),
        RiskMeasureSpec::spectral({{0.5, 1.0 / 3.0}, {0.5, 0.8}})}) {
    CoherenceReport r = check_coherence(spec, 1000, 99);
    CHECK(r.passed());
    CHECK(r.trials == 1000);
    CHECK(r.counterexample.empty());
  }
}

TEST_CASE("coherence audit rejects broken evaluators") {
  // Scaling the tail average breaks translation invariance.
  auto scaled = [](const RandomLoss& l) {
    return 1.1 * evaluate(RiskMeasureSpec::avar(0.5), l);
  };
  CoherenceReport r1 = check_coherence(scaled, 400, 5);
  CHECK_FALSE(r1.passed());
  CHECK_FALSE(r1.translation_invariance);
  CHECK_FALSE(r1.counterexample.empty());

  // A variance penalty breaks positive homogeneity.
  auto variance_penalized = [](const RandomLoss& l) {
    double m = l.mean(), v = 0;
    for (Index i = 0; i < l.size(); ++i)
      v += l.probs[i] * (l.values[i] - m) * (l.values[i] - m);
    return m + 0.1 * v;
  };
  CoherenceReport r2 = check_coherence(variance_penalized, 400, 5);
  CHECK_FALSE(r2.passed());
  CHECK_FALSE(r2.positive_homogeneity);

  // The spread between best and worst outcome is not monotone.
  auto spread = [](const RandomLoss& l) {
    double lo = l.values[0], hi = l.values[0];
    for (Index i = 0; i < l.size(); ++i) {
      if (l.probs[i] <= 0) continue;
      lo = std::min(lo, l.values[i]);
      hi = std::max(hi, l.values[i]);
    }
    return hi - lo;
  };
  CoherenceReport r3 = check_coherence(spread, 400, 5);
  CHECK_FALSE(r3.passed());
  CHECK_FALSE(r3.monotonicity);

  // An index-weighted average is not law invariant.
  auto first_atom = [](const RandomLoss& l) { return l.values[0]; };
  CoherenceReport r4 = check_coherence(first_atom, 400, 5);
  CHECK_FALSE(r4.law_invariance);
}

TEST_CASE("spectral mixtures combine component tails") {
  RiskMeasureSpec mix =
      RiskMeasureSpec::spectral({{0.5, 1.0 / 3.0}, {0.5, 0.0}});
  RandomLoss l = uniform4({59, 11, 59, 7});
  CHECK(evaluate(mix, l) == doctest::Approx(0.5 * 47 + 0.5 * 34));
  DualDensity z = optimal_dual(mix, l);
  CHECK(z.values[0] == doctest::Approx(1.25));
  CHECK(z.values[1] == doctest::Approx(1.0));
  CHECK(z.values[2] == doctest::Approx(1.25));
  CHECK(z.values[3] == doctest::Approx(0.5));
  CHECK(is_dual_feasible(mix, l.probs, z));
  CHECK(is_dual_optimal(mix, l, z));
  // A pure cap density is infeasible for the mixture: the expectation
  // component forces a floor of one half on every atom.
  CHECK_FALSE(is_dual_feasible(mix, l.probs, DualDensity{{1.5, 1, 1.5, 0}}));
}

TEST_CASE("polytope measures take the worst vertex") {
  std::vector<std::vector<double>> verts = {
      {1, 1, 1, 1}, {2, 0, 1, 1}, {0, 2, 1, 1}};
  RiskMeasureSpec spec = RiskMeasureSpec::polytope(verts);
  std::vector<double> p{0.25, 0.25, 0.25, 0.25};

  RandomLoss spiked = uniform4({10, 0, 0, 0});
  CHECK(evaluate(spec, spiked) == doctest::Approx(5.0));
  CHECK(optimal_dual(spec, spiked).values == verts[1]);

  RandomLoss tilted = uniform4({0, 10, 0, 0});
  CHECK(evaluate(spec, tilted) == doctest::Approx(5.0));
  CHECK(optimal_dual(spec, tilted).values == verts[2]);

  // Interior points of the hull are feasible, outside points are not.
  CHECK(is_dual_feasible(spec, p, DualDensity{{1.5, 0.5, 1, 1}}));
  CHECK_FALSE(is_dual_feasible(spec, p, DualDensity{{3, -1, 1, 1}}));
  CHECK_FALSE(is_dual_feasible(spec, p, DualDensity{{1, 1, 1.2, 0.8}}));

  // Vertices must average to one under the loss probabilities.
  RiskMeasureSpec bad = RiskMeasureSpec::polytope({{2, 2, 1, 1}});
  CHECK_THROWS_AS(evaluate(bad, spiked), InputError);
}

TEST_CASE("describe names the measure") {
  CHECK(RiskMeasureSpec::avar_rational(1, 3).describe() == "avar(1/3)");
  CHECK(RiskMeasureSpec::expectation().describe() == "expectation");
  CHECK(RiskMeasureSpec::esssup().describe() == "esssup");
}
