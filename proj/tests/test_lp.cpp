#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "riskgame/lp.hpp"
#include "riskgame/rng.hpp"

using namespace riskgame;
using namespace riskgame::lp;

TEST_CASE("single bound constraint") {
  LinearProgram p;
  Index x = p.add_variable(1.0);
  p.add_row({{x, 1.0}}, Rel::Ge, 3.0);
  Solution s = solve(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.x[0] == doctest::Approx(3.0));
  CHECK(s.objective == doctest::Approx(3.0));
  // The >= row is binding with multiplier 1 in a minimization.
  CHECK(s.row_duals[0] == doctest::Approx(1.0));
}

TEST_CASE("infeasible program") {
  LinearProgram p;
  Index x = p.add_variable(0.0);
  p.add_row({{x, 1.0}}, Rel::Le, 0.0);
  p.add_row({{x, 1.0}}, Rel::Ge, 1.0);
  CHECK(solve(p).status == Status::Infeasible);
}

TEST_CASE("unbounded program") {
  LinearProgram p;
  Index x = p.add_variable(-1.0);
  p.add_row({{x, 1.0}}, Rel::Ge, 0.0);
  CHECK(solve(p).status == Status::Unbounded);
}

TEST_CASE("density box maximization") {
  // max sum p_i L_i Z_i over 0 <= Z <= 3/2 with sum p_i Z_i = 1, p uniform.
  const double L[4] = {59, 11, 59, 7};
  LinearProgram p;
  p.sense = Sense::Maximize;
  std::vector<std::pair<Index, double>> budget;
  for (Index i = 0; i < 4; ++i) {
    Index z = p.add_variable(0.25 * L[i], 0.0, 1.5);
    budget.push_back({z, 0.25});
  }
  p.add_row(budget, Rel::Eq, 1.0);
  Solution s = solve(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.objective == doctest::Approx(47.0).epsilon(1e-10));
  CHECK(s.x[0] == doctest::Approx(1.5));
  CHECK(s.x[1] == doctest::Approx(1.0));
  CHECK(s.x[2] == doctest::Approx(1.5));
  CHECK(s.x[3] == doctest::Approx(0.0));
}

TEST_CASE("degenerate cycling-prone instance") {
  // Beale's classical example; the stall heuristic must fall back to Bland's
  // rule and still reach the optimum -1/20.
  LinearProgram p;
  Index x1 = p.add_variable(-0.75);
  Index x2 = p.add_variable(150.0);
  Index x3 = p.add_variable(-0.02);
  Index x4 = p.add_variable(6.0);
  p.add_row({{x1, 0.25}, {x2, -60.0}, {x3, -1.0 / 25.0}, {x4, 9.0}}, Rel::Le, 0.0);
  p.add_row({{x1, 0.5}, {x2, -90.0}, {x3, -1.0 / 50.0}, {x4, 3.0}}, Rel::Le, 0.0);
  p.add_row({{x3, 1.0}}, Rel::Le, 1.0);
  Solution s = solve(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.objective == doctest::Approx(-0.05).epsilon(1e-9));
}

TEST_CASE("free variable epigraph") {
  LinearProgram p;
  Index eta = p.add_variable(1.0, -kInf, kInf);
  for (double v : {3.0, 7.0, 2.0}) p.add_row({{eta, 1.0}}, Rel::Ge, v);
  Solution s = solve(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.objective == doctest::Approx(7.0));
}

TEST_CASE("two-sided bounds") {
  LinearProgram p;
  p.sense = Sense::Maximize;
  Index x = p.add_variable(1.0, 0.0, 2.0);
  Index y = p.add_variable(2.0, -1.0, 1.0);
  p.add_row({{x, 1.0}, {y, 1.0}}, Rel::Le, 2.0);
  Solution s = solve(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.x[0] == doctest::Approx(1.0));
  CHECK(s.x[1] == doctest::Approx(1.0));
  CHECK(s.objective == doctest::Approx(3.0));
}

TEST_CASE("covering dual value") {
  LinearProgram p;
  Index x = p.add_variable(2.0);
  Index y = p.add_variable(3.0);
  p.add_row({{x, 1.0}, {y, 1.0}}, Rel::Ge, 10.0);
  Solution s = solve(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.objective == doctest::Approx(20.0));
  CHECK(s.row_duals[0] == doctest::Approx(2.0));
}

TEST_CASE("equality-constrained transportation") {
  LinearProgram p;
  // x[i][j]: ship from supply i to demand j.
  Index x00 = p.add_variable(1.0), x01 = p.add_variable(2.0);
  Index x10 = p.add_variable(3.0), x11 = p.add_variable(1.0);
  p.add_row({{x00, 1.0}, {x01, 1.0}}, Rel::Eq, 3.0);
  p.add_row({{x10, 1.0}, {x11, 1.0}}, Rel::Eq, 2.0);
  p.add_row({{x00, 1.0}, {x10, 1.0}}, Rel::Eq, 2.0);
  p.add_row({{x01, 1.0}, {x11, 1.0}}, Rel::Eq, 3.0);
  Solution s = solve(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.objective == doctest::Approx(6.0));
}

TEST_CASE("random instances solve and agree across pivot rules") {
  Rng rng(20240811);
  for (int rep = 0; rep < 60; ++rep) {
    Index n = 2 + rng.below(5), m = 1 + rng.below(4);
    std::vector<double> x0(n);
    LinearProgram p;
    for (Index j = 0; j < n; ++j) {
      x0[j] = rng.uniform(0, 5);
      p.add_variable(rng.uniform(-2, 2), 0.0, 10.0);
    }
    for (Index i = 0; i < m; ++i) {
      std::vector<std::pair<Index, double>> row;
      double ax = 0;
      for (Index j = 0; j < n; ++j) {
        double a = rng.uniform(-3, 3);
        row.push_back({j, a});
        ax += a * x0[j];
      }
      int kind = static_cast<int>(rng.below(3));
      if (kind == 0) p.add_row(row, Rel::Le, ax + rng.uniform(0, 2));
      else if (kind == 1) p.add_row(row, Rel::Ge, ax - rng.uniform(0, 2));
      else p.add_row(row, Rel::Eq, ax);
    }
    Solution a = solve(p, PivotRule::Dantzig);
    Solution b = solve(p, PivotRule::Bland);
    REQUIRE(a.status == Status::Optimal);  // x0 is feasible by construction
    REQUIRE(b.status == Status::Optimal);
    CHECK(std::abs(a.objective - b.objective) <= 1e-7 * std::max(1.0, std::abs(a.objective)));
    double cx0 = 0;
    for (Index j = 0; j < n; ++j) cx0 += p.objective[j] * x0[j];
    CHECK(a.objective <= cx0 + 1e-7);
  }
}

TEST_CASE("deterministic output") {
  LinearProgram p;
  p.sense = Sense::Maximize;
  for (Index i = 0; i < 4; ++i) p.add_variable(1.0 + i, 0.0, 1.0);
  p.add_row({{0, 1.0}, {1, 1.0}, {2, 1.0}, {3, 1.0}}, Rel::Le, 2.0);
  Solution a = solve(p), b = solve(p);
  REQUIRE(a.status == Status::Optimal);
  for (Index j = 0; j < 4; ++j) CHECK(a.x[j] == b.x[j]);
}
