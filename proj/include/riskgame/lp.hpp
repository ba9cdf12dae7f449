#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "riskgame/errors.hpp"
#include "riskgame/game.hpp"

namespace riskgame::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
// Primal feasibility tolerance on solved instances.
inline constexpr double kFeasTol = 1e-8;
// Complementary slackness / duality gap tolerance.
inline constexpr double kSlackTol = 1e-7;
// Entries below this magnitude are not acceptable pivots.
inline constexpr double kPivotTol = 1e-9;

enum class Sense { Minimize, Maximize };
enum class Rel { Le, Eq, Ge };
enum class Status { Optimal, Infeasible, Unbounded, IllConditioned };
enum class PivotRule { Dantzig, Bland };

// A dense linear program over real variables with per-variable bounds and
// mixed-sense rows.  Rows are stored as sparse coefficient lists for
// convenient construction; the solver densifies them.
struct LinearProgram {
  Sense sense = Sense::Minimize;
  std::vector<double> objective;
  std::vector<double> lower;  // per variable, may be -inf
  std::vector<double> upper;  // per variable, may be +inf
  std::vector<std::vector<std::pair<Index, double>>> rows;
  std::vector<Rel> rels;
  std::vector<double> rhs;

  Index num_vars() const { return objective.size(); }
  Index num_rows() const { return rows.size(); }

  Index add_variable(double obj, double lo = 0.0, double up = kInf);
  void add_row(std::vector<std::pair<Index, double>> coeffs, Rel rel, double b);
};

struct Solution {
  Status status = Status::IllConditioned;
  std::vector<double> x;
  double objective = 0.0;
  // Multiplier per original row, in the row's stated orientation.  For a
  // Minimize program: >= rows carry y >= 0, <= rows carry y <= 0, = rows are
  // free.  Signs flip for Maximize.
  std::vector<double> row_duals;
};

// Two-phase dense simplex.  Pivoting starts with the given rule; a
// degeneracy heuristic switches to Bland's rule if the objective stalls, so
// the solve always terminates.  Deterministic for fixed input and rule.
// Optimal solutions are verified for primal feasibility and duality gap
// before being returned; verification failure yields IllConditioned, never a
// silently wrong answer.
Solution solve(const LinearProgram& lp, PivotRule rule = PivotRule::Dantzig);

}  // namespace riskgame::lp
