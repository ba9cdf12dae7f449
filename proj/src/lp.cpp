#include "riskgame/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace riskgame::lp {

Index LinearProgram::add_variable(double obj, double lo, double up) {
  if (std::isnan(obj) || std::isnan(lo) || std::isnan(up) || lo > up)
    throw InputError("bad variable bounds or objective");
  objective.push_back(obj);
  lower.push_back(lo);
  upper.push_back(up);
  return objective.size() - 1;
}

void LinearProgram::add_row(std::vector<std::pair<Index, double>> coeffs,
                            Rel rel, double b) {
  for (auto& [j, a] : coeffs) {
    if (j >= num_vars()) throw InputError("row references unknown variable");
    if (!std::isfinite(a)) throw InputError("non-finite row coefficient");
  }
  if (!std::isfinite(b)) throw InputError("non-finite right-hand side");
  rows.push_back(std::move(coeffs));
  rels.push_back(rel);
  rhs.push_back(b);
}

namespace {

// How each original variable maps into the nonnegative internal variables.
enum class VarKind : std::uint8_t { Shift, Negate, Split };

struct VarMap {
  VarKind kind;
  Index col;      // first internal column
  double offset;  // x = offset + u (Shift), x = offset - u (Negate)
};

struct Tableau {
  Index m = 0, ncols = 0;
  std::vector<std::vector<double>> t;  // m x (ncols + 1), last col = rhs
  std::vector<Index> basis;

  double& at(Index i, Index j) { return t[i][j]; }
  double& b(Index i) { return t[i][ncols]; }

  void pivot(Index row, Index col) {
    double piv = t[row][col];
    for (Index j = 0; j <= ncols; ++j) t[row][j] /= piv;
    for (Index i = 0; i < m; ++i) {
      if (i == row) continue;
      double f = t[i][col];
      if (f == 0.0) continue;
      for (Index j = 0; j <= ncols; ++j) t[i][j] -= f * t[row][j];
      t[i][col] = 0.0;  // cancel roundoff in the pivot column
    }
    t[row][col] = 1.0;
    basis[row] = col;
  }
};

struct SimplexRun {
  Tableau tab;
  std::vector<char> banned;  // columns excluded from entering
  PivotRule rule;
  Index max_iters;

  double objective(const std::vector<double>& cost) const {
    double z = 0;
    for (Index i = 0; i < tab.m; ++i)
      z += cost[tab.basis[i]] * tab.t[i][tab.ncols];
    return z;
  }

  std::vector<double> reduced_costs(const std::vector<double>& cost) const {
    std::vector<double> r = cost;
    for (Index i = 0; i < tab.m; ++i) {
      double cb = cost[tab.basis[i]];
      if (cb == 0.0) continue;
      const auto& row = tab.t[i];
      for (Index j = 0; j < tab.ncols; ++j) r[j] -= cb * row[j];
    }
    return r;
  }

  // Minimizes cost over the current tableau.  Returns Optimal or Unbounded;
  // IllConditioned when the iteration cap is hit.
  Status minimize(const std::vector<double>& cost) {
    PivotRule active = rule;
    double last_obj = objective(cost);
    Index stalled = 0;
    const Index stall_limit = 64 + 4 * tab.m;
    for (Index iter = 0; iter < max_iters; ++iter) {
      std::vector<double> r = reduced_costs(cost);
      Index enter = tab.ncols;
      if (active == PivotRule::Dantzig) {
        double best = -kPivotTol;
        for (Index j = 0; j < tab.ncols; ++j)
          if (!banned[j] && r[j] < best) best = r[j], enter = j;
      } else {
        for (Index j = 0; j < tab.ncols; ++j)
          if (!banned[j] && r[j] < -kPivotTol) {
            enter = j;
            break;
          }
      }
      if (enter == tab.ncols) return Status::Optimal;

      Index leave = tab.m;
      double best_ratio = 0;
      for (Index i = 0; i < tab.m; ++i) {
        double a = tab.t[i][enter];
        if (a <= kPivotTol) continue;
        double ratio = tab.t[i][tab.ncols] / a;
        if (leave == tab.m || ratio < best_ratio - 1e-12 ||
            (ratio < best_ratio + 1e-12 && tab.basis[i] < tab.basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave == tab.m) return Status::Unbounded;
      tab.pivot(leave, enter);

      double obj = objective(cost);
      if (obj < last_obj - 1e-12) {
        stalled = 0;
        last_obj = obj;
      } else if (++stalled > stall_limit) {
        active = PivotRule::Bland;  // anti-cycling fallback
      }
    }
    return Status::IllConditioned;
  }
};

}  // namespace

Solution solve(const LinearProgram& lp, PivotRule rule) {
  const Index n = lp.num_vars();
  const bool maximize = lp.sense == Sense::Maximize;

  // --- Map original variables onto nonnegative internal columns. ---
  std::vector<VarMap> vmap(n);
  Index ncols = 0;
  for (Index j = 0; j < n; ++j) {
    double lo = lp.lower[j], up = lp.upper[j];
    if (lo > -kInf) {
      vmap[j] = {VarKind::Shift, ncols++, lo};
    } else if (up < kInf) {
      vmap[j] = {VarKind::Negate, ncols++, up};
    } else {
      vmap[j] = {VarKind::Split, ncols, 0.0};
      ncols += 2;
    }
  }
  const Index nstruct = ncols;

  // Internal cost over structural columns (always a minimization).
  std::vector<double> cost(nstruct, 0.0);
  for (Index j = 0; j < n; ++j) {
    double c = maximize ? -lp.objective[j] : lp.objective[j];
    switch (vmap[j].kind) {
      case VarKind::Shift: cost[vmap[j].col] = c; break;
      case VarKind::Negate: cost[vmap[j].col] = -c; break;
      case VarKind::Split:
        cost[vmap[j].col] = c;
        cost[vmap[j].col + 1] = -c;
        break;
    }
  }

  // Densified constraint rows: originals first, then upper-bound rows for
  // doubly-bounded variables.
  struct IntRow {
    std::vector<double> a;
    Rel rel;
    double b;
    double sign = 1.0;  // -1 when the row was negated to make b >= 0
  };
  std::vector<IntRow> irows;
  for (Index i = 0; i < lp.num_rows(); ++i) {
    IntRow row{std::vector<double>(nstruct, 0.0), lp.rels[i], lp.rhs[i]};
    for (auto [j, a] : lp.rows[i]) {
      switch (vmap[j].kind) {
        case VarKind::Shift:
          row.a[vmap[j].col] += a;
          row.b -= a * vmap[j].offset;
          break;
        case VarKind::Negate:
          row.a[vmap[j].col] -= a;
          row.b -= a * vmap[j].offset;
          break;
        case VarKind::Split:
          row.a[vmap[j].col] += a;
          row.a[vmap[j].col + 1] -= a;
          break;
      }
    }
    irows.push_back(std::move(row));
  }
  const Index n_orig_rows = irows.size();
  for (Index j = 0; j < n; ++j) {
    if (vmap[j].kind == VarKind::Shift && lp.upper[j] < kInf) {
      IntRow row{std::vector<double>(nstruct, 0.0), Rel::Le,
                 lp.upper[j] - lp.lower[j]};
      row.a[vmap[j].col] = 1.0;
      irows.push_back(std::move(row));
    }
  }

  for (auto& row : irows) {
    if (row.b < 0) {
      for (double& a : row.a) a = -a;
      row.b = -row.b;
      row.sign = -1.0;
      if (row.rel == Rel::Le) row.rel = Rel::Ge;
      else if (row.rel == Rel::Ge) row.rel = Rel::Le;
    }
  }

  // --- Assemble the tableau: structural | slack/surplus | artificial. ---
  const Index m = irows.size();
  Index nslack = 0, nart = 0;
  for (const auto& row : irows) {
    if (row.rel != Rel::Eq) ++nslack;
    if (row.rel != Rel::Le) ++nart;
  }
  SimplexRun run;
  run.rule = rule;
  run.tab.m = m;
  run.tab.ncols = nstruct + nslack + nart;
  run.tab.t.assign(m, std::vector<double>(run.tab.ncols + 1, 0.0));
  run.tab.basis.assign(m, 0);
  run.banned.assign(run.tab.ncols, 0);
  run.max_iters = 4000 + 200 * (m + run.tab.ncols);

  std::vector<Index> unit_col(m);  // the row's slack or artificial column
  Index next_slack = nstruct, next_art = nstruct + nslack;
  for (Index i = 0; i < m; ++i) {
    auto& t = run.tab.t[i];
    std::copy(irows[i].a.begin(), irows[i].a.end(), t.begin());
    t[run.tab.ncols] = irows[i].b;
    switch (irows[i].rel) {
      case Rel::Le:
        t[next_slack] = 1.0;
        unit_col[i] = next_slack;
        run.tab.basis[i] = next_slack++;
        break;
      case Rel::Ge:
        t[next_slack] = -1.0;
        ++next_slack;
        t[next_art] = 1.0;
        unit_col[i] = next_art;
        run.tab.basis[i] = next_art++;
        break;
      case Rel::Eq:
        t[next_art] = 1.0;
        unit_col[i] = next_art;
        run.tab.basis[i] = next_art++;
        break;
    }
  }

  Solution sol;

  // --- Phase 1: drive the artificial variables to zero. ---
  if (nart > 0) {
    std::vector<double> phase1(run.tab.ncols, 0.0);
    for (Index j = nstruct + nslack; j < run.tab.ncols; ++j) phase1[j] = 1.0;
    Status st = run.minimize(phase1);
    if (st != Status::Optimal) {
      // The phase-1 objective is bounded below by zero, so anything but
      // Optimal here is numerical breakdown.
      sol.status = Status::IllConditioned;
      return sol;
    }
    double scale = 1.0;
    for (const auto& row : irows) scale = std::max(scale, std::abs(row.b));
    if (run.objective(phase1) > 1e-8 * scale) {
      sol.status = Status::Infeasible;
      return sol;
    }
    // Pivot leftover artificials out of the basis where possible.
    for (Index i = 0; i < m; ++i) {
      if (run.tab.basis[i] < nstruct + nslack) continue;
      for (Index j = 0; j < nstruct + nslack; ++j) {
        if (std::abs(run.tab.t[i][j]) > kPivotTol) {
          run.tab.pivot(i, j);
          break;
        }
      }
    }
    for (Index j = nstruct + nslack; j < run.tab.ncols; ++j) run.banned[j] = 1;
  }

  // --- Phase 2: minimize the real objective. ---
  std::vector<double> phase2(run.tab.ncols, 0.0);
  std::copy(cost.begin(), cost.end(), phase2.begin());
  Status st = run.minimize(phase2);
  if (st == Status::Unbounded) {
    sol.status = Status::Unbounded;
    return sol;
  }
  if (st != Status::Optimal) {
    sol.status = Status::IllConditioned;
    return sol;
  }

  // --- Recover the original-variable solution. ---
  std::vector<double> u(run.tab.ncols, 0.0);
  for (Index i = 0; i < m; ++i) u[run.tab.basis[i]] = run.tab.t[i][run.tab.ncols];
  sol.x.assign(n, 0.0);
  for (Index j = 0; j < n; ++j) {
    switch (vmap[j].kind) {
      case VarKind::Shift: sol.x[j] = vmap[j].offset + u[vmap[j].col]; break;
      case VarKind::Negate: sol.x[j] = vmap[j].offset - u[vmap[j].col]; break;
      case VarKind::Split: sol.x[j] = u[vmap[j].col] - u[vmap[j].col + 1]; break;
    }
  }
  sol.objective = 0.0;
  for (Index j = 0; j < n; ++j) sol.objective += lp.objective[j] * sol.x[j];

  // Row duals from the final reduced costs of each row's unit column.
  std::vector<double> r = run.reduced_costs(phase2);
  sol.row_duals.assign(lp.num_rows(), 0.0);
  for (Index i = 0; i < n_orig_rows; ++i) {
    double y = -r[unit_col[i]] * irows[i].sign;
    sol.row_duals[i] = maximize ? -y : y;
  }

  // --- Verify before reporting Optimal. ---
  for (Index i = 0; i < lp.num_rows(); ++i) {
    double ax = 0;
    for (auto [j, a] : lp.rows[i]) ax += a * sol.x[j];
    double tol = kFeasTol * std::max(1.0, std::abs(lp.rhs[i]));
    bool ok = true;
    switch (lp.rels[i]) {
      case Rel::Le: ok = ax <= lp.rhs[i] + tol; break;
      case Rel::Ge: ok = ax >= lp.rhs[i] - tol; break;
      case Rel::Eq: ok = std::abs(ax - lp.rhs[i]) <= tol; break;
    }
    if (!ok) {
      sol.status = Status::IllConditioned;
      return sol;
    }
  }
  for (Index j = 0; j < n; ++j) {
    if (sol.x[j] < lp.lower[j] - kFeasTol || sol.x[j] > lp.upper[j] + kFeasTol) {
      sol.status = Status::IllConditioned;
      return sol;
    }
  }
  // Duality gap in the internal standard form: cost'u == rhs'y with y read
  // from the unit columns of every internal row (bound rows included).
  double primal = run.objective(phase2);
  double dual = 0;
  for (Index i = 0; i < m; ++i) dual += -r[unit_col[i]] * irows[i].b;
  if (std::abs(primal - dual) > kSlackTol * std::max(1.0, std::abs(primal))) {
    sol.status = Status::IllConditioned;
    return sol;
  }

  sol.status = Status::Optimal;
  return sol;
}

}  // namespace riskgame::lp
