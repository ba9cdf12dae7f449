#include "riskgame/equilibrium.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

#include "riskgame/rng.hpp"

namespace riskgame {

namespace {

// ---------------------------------------------------------------------------
// Indexing helpers
// ---------------------------------------------------------------------------

std::vector<Index> sizes_without(const std::vector<Index>& sizes, Index player) {
  std::vector<Index> out;
  for (Index j = 0; j < sizes.size(); ++j)
    if (j != player) out.push_back(sizes[j]);
  return out;
}

// Flat index in `full` whose player coordinate is `own` and whose remaining
// coordinates are the flat index `opp` of the space with player removed.
Index insert_coordinate(const ProfileSpace& full, const ProfileSpace& opp,
                        Index player, Index own, Index opp_flat) {
  std::vector<Index> rest = opp.unflatten(opp_flat);
  std::vector<Index> coords(full.sizes.size());
  Index k = 0;
  for (Index j = 0; j < coords.size(); ++j)
    coords[j] = (j == player) ? own : rest[k++];
  return full.flatten(coords);
}

// Expected loss of `player` per (type profile, own action) when everyone
// else follows `others`: K[t * nA + a].
std::vector<double> action_kernel(const Game& game, Index player,
                                  const StrategyProfile& others) {
  const Index nT = game.num_type_profiles();
  const Index nA = game.actions[player].size();
  std::vector<double> K(nT * nA, 0.0);
  for (Index t = 0; t < nT; ++t) {
    for (Index a = 0; a < game.num_action_profiles(); ++a) {
      double w = 1.0;
      for (Index j = 0; j < game.num_players() && w > 0; ++j) {
        if (j == player) continue;
        Index tj = game.type_space.coordinate(t, j);
        Index aj = game.action_space.coordinate(a, j);
        w *= others.of(j).rows[tj][aj];
      }
      if (w == 0) continue;
      Index ai = game.action_space.coordinate(a, player);
      K[t * nA + ai] += w * game.loss(player, t, a);
    }
  }
  return K;
}

RandomLoss loss_from_rows(const Game& game, Index player,
                          const std::vector<double>& K,
                          const std::vector<std::vector<double>>& rows) {
  const Index nA = game.actions[player].size();
  RandomLoss out;
  out.probs = game.prior;
  out.values.assign(game.num_type_profiles(), 0.0);
  for (Index t = 0; t < game.num_type_profiles(); ++t) {
    Index ti = game.type_space.coordinate(t, player);
    double acc = 0;
    for (Index a = 0; a < nA; ++a) acc += rows[ti][a] * K[t * nA + a];
    out.values[t] = acc;
  }
  return out;
}

// Loss when the player plays one fixed pure action at every type.
RandomLoss loss_from_action(const Game& game, Index player,
                            const std::vector<double>& K, Index action) {
  const Index nA = game.actions[player].size();
  RandomLoss out;
  out.probs = game.prior;
  out.values.assign(game.num_type_profiles(), 0.0);
  for (Index t = 0; t < game.num_type_profiles(); ++t)
    out.values[t] = K[t * nA + action];
  return out;
}

bool pure_row(const std::vector<double>& row, Index* action) {
  for (Index a = 0; a < row.size(); ++a) {
    if (row[a] >= 1.0 - 1e-9) {
      *action = a;
      return true;
    }
  }
  return false;
}

std::string strategy_text(const Game& game, Index player,
                          const BehavioralStrategy& s) {
  std::string pure;
  for (const auto& row : s.rows) {
    Index a = 0;
    if (!pure_row(row, &a)) {
      std::ostringstream os;
      os << "mixed(";
      for (Index t = 0; t < s.rows.size(); ++t) {
        if (t) os << " | ";
        for (Index b = 0; b < s.rows[t].size(); ++b) {
          if (b) os << ":";
          os << s.rows[t][b];
        }
      }
      os << ")";
      return os.str();
    }
    pure += game.actions[player][a];
  }
  return pure;
}

void check_specs(const Game& game, const std::vector<RiskMeasureSpec>& specs) {
  if (specs.size() != game.num_players())
    throw InputError("expected one risk measure per player, got " +
                     std::to_string(specs.size()));
}

// Component levels of a spectral mixture as (weight, cap) with cap == kInf
// for level-one components.
std::vector<std::pair<double, double>> spectral_caps(
    const RiskMeasureSpec& spec) {
  std::vector<std::pair<double, double>> out;
  for (const auto& [w, level] : spec.components) {
    double cap = (level >= 1.0) ? lp::kInf : RiskMeasureSpec::avar(level).cap();
    out.push_back({w, cap});
  }
  return out;
}

void check_polytope_vertices(const RiskMeasureSpec& spec,
                             const std::vector<double>& probs) {
  for (const auto& v : spec.vertices) {
    if (v.size() != probs.size())
      throw InputError("polytope vertex has wrong length");
    double mean = 0;
    for (Index t = 0; t < probs.size(); ++t) {
      if (v[t] < -kProbTol)
        throw InputError("polytope vertex has a negative entry");
      mean += probs[t] * v[t];
    }
    if (std::abs(mean - 1.0) > kValueTol)
      throw InputError("polytope vertex is not a unit-mean density");
  }
}

// ---------------------------------------------------------------------------
// Best-response linear program
// ---------------------------------------------------------------------------

struct BrSolution {
  std::vector<std::vector<double>> rows;
  double value = 0;
};

// Minimise the player's ex ante risk over behavioural strategies by LP:
// epigraph form for tail averages, direct objective for expectations,
// worst-vertex form for polytope sets.
BrSolution best_response_lp(const Game& game, const RiskMeasureSpec& spec,
                            Index player, const StrategyProfile& others,
                            lp::PivotRule rule) {
  const Index nT = game.types[player].size();
  const Index nA = game.actions[player].size();
  const Index nAtoms = game.num_type_profiles();
  const std::vector<double> K = action_kernel(game, player, others);
  const std::vector<double>& P = game.prior;

  lp::LinearProgram prog;
  prog.sense = lp::Sense::Minimize;

  // Strategy variables x[ti][a], laid out ti * nA + a.
  std::vector<Index> x(nT * nA);
  for (Index i = 0; i < x.size(); ++i) x[i] = prog.add_variable(0.0, 0.0, 1.0);

  // L_t as coefficient list over x for one atom.
  auto atom_coeffs = [&](Index t, double scale) {
    std::vector<std::pair<Index, double>> row;
    Index ti = game.type_space.coordinate(t, player);
    for (Index a = 0; a < nA; ++a) {
      double k = K[t * nA + a];
      if (k != 0) row.push_back({x[ti * nA + a], scale * k});
    }
    return row;
  };

  switch (spec.kind) {
    case RiskKind::Expectation: {
      // Objective sum_t P(t) L_t folded into the x coefficients.
      std::vector<double> obj(nT * nA, 0.0);
      for (Index t = 0; t < nAtoms; ++t) {
        if (P[t] <= 0) continue;
        Index ti = game.type_space.coordinate(t, player);
        for (Index a = 0; a < nA; ++a) obj[ti * nA + a] += P[t] * K[t * nA + a];
      }
      for (Index i = 0; i < x.size(); ++i) prog.objective[x[i]] = obj[i];
      break;
    }
    case RiskKind::AVaR: {
      double cap = spec.cap();
      Index eta = prog.add_variable(1.0, -lp::kInf, lp::kInf);
      if (cap == lp::kInf) {
        // Level one: plain epigraph over atoms with positive mass.
        for (Index t = 0; t < nAtoms; ++t) {
          if (P[t] <= 0) continue;
          auto row = atom_coeffs(t, -1.0);
          row.push_back({eta, 1.0});
          prog.add_row(std::move(row), lp::Rel::Ge, 0.0);
        }
      } else {
        for (Index t = 0; t < nAtoms; ++t) {
          if (P[t] <= 0) continue;
          Index s = prog.add_variable(cap * P[t], 0.0, lp::kInf);
          auto row = atom_coeffs(t, -1.0);
          row.push_back({eta, 1.0});
          row.push_back({s, 1.0});
          prog.add_row(std::move(row), lp::Rel::Ge, 0.0);
        }
      }
      break;
    }
    case RiskKind::EssentialSup: {
      Index eta = prog.add_variable(1.0, -lp::kInf, lp::kInf);
      for (Index t = 0; t < nAtoms; ++t) {
        if (P[t] <= 0) continue;
        auto row = atom_coeffs(t, -1.0);
        row.push_back({eta, 1.0});
        prog.add_row(std::move(row), lp::Rel::Ge, 0.0);
      }
      break;
    }
    case RiskKind::SpectralMixture: {
      for (auto [w, cap] : spectral_caps(spec)) {
        Index eta = prog.add_variable(w, -lp::kInf, lp::kInf);
        if (cap == lp::kInf) {
          for (Index t = 0; t < nAtoms; ++t) {
            if (P[t] <= 0) continue;
            auto row = atom_coeffs(t, -1.0);
            row.push_back({eta, 1.0});
            prog.add_row(std::move(row), lp::Rel::Ge, 0.0);
          }
        } else {
          for (Index t = 0; t < nAtoms; ++t) {
            if (P[t] <= 0) continue;
            Index s = prog.add_variable(w * cap * P[t], 0.0, lp::kInf);
            auto row = atom_coeffs(t, -1.0);
            row.push_back({eta, 1.0});
            row.push_back({s, 1.0});
            prog.add_row(std::move(row), lp::Rel::Ge, 0.0);
          }
        }
      }
      break;
    }
    case RiskKind::PolytopeDual: {
      check_polytope_vertices(spec, P);
      Index eta = prog.add_variable(1.0, -lp::kInf, lp::kInf);
      for (const auto& v : spec.vertices) {
        // eta >= sum_t P(t) v(t) L_t.
        std::vector<double> coeff(nT * nA, 0.0);
        for (Index t = 0; t < nAtoms; ++t) {
          double pz = P[t] * v[t];
          if (pz == 0) continue;
          Index ti = game.type_space.coordinate(t, player);
          for (Index a = 0; a < nA; ++a)
            coeff[ti * nA + a] += pz * K[t * nA + a];
        }
        std::vector<std::pair<Index, double>> row{{eta, 1.0}};
        for (Index i = 0; i < coeff.size(); ++i)
          if (coeff[i] != 0) row.push_back({x[i], -coeff[i]});
        prog.add_row(std::move(row), lp::Rel::Ge, 0.0);
      }
      break;
    }
  }

  // One probability row per own type.
  for (Index ti = 0; ti < nT; ++ti) {
    std::vector<std::pair<Index, double>> row;
    for (Index a = 0; a < nA; ++a) row.push_back({x[ti * nA + a], 1.0});
    prog.add_row(std::move(row), lp::Rel::Eq, 1.0);
  }

  lp::Solution sol = lp::solve(prog, rule);
  if (sol.status != lp::Status::Optimal)
    throw NumericError("best-response LP did not reach an optimum");

  BrSolution out;
  out.value = sol.objective;
  out.rows.assign(nT, std::vector<double>(nA, 0.0));
  for (Index ti = 0; ti < nT; ++ti) {
    double total = 0;
    for (Index a = 0; a < nA; ++a) {
      double v = std::max(0.0, sol.x[x[ti * nA + a]]);
      out.rows[ti][a] = v;
      total += v;
    }
    if (total <= 0) {
      out.rows[ti].assign(nA, 0.0);
      out.rows[ti][0] = 1.0;
    } else {
      for (double& v : out.rows[ti]) v /= total;
    }
  }
  return out;
}

// Canonicalise the LP solution: type by type, substitute the lowest-index
// pure action whose substitution keeps the overall risk at the LP optimum.
// When no pure action does (the minimum over the row simplex can be interior
// -- mixing strictly helps worst-case measures), the mixed LP row stays.
std::vector<std::vector<double>> canonicalize(const Game& game,
                                              const RiskMeasureSpec& spec,
                                              Index player,
                                              const StrategyProfile& others,
                                              const BrSolution& br) {
  const Index nT = game.types[player].size();
  const Index nA = game.actions[player].size();
  const std::vector<double> K = action_kernel(game, player, others);
  const double slack = 1e-8 * std::max(1.0, std::abs(br.value));

  std::vector<std::vector<double>> rows = br.rows;
  for (Index ti = 0; ti < nT; ++ti) {
    for (Index a = 0; a < nA; ++a) {
      auto trial = rows;
      trial[ti].assign(nA, 0.0);
      trial[ti][a] = 1.0;
      double v = evaluate(spec, loss_from_rows(game, player, K, trial));
      if (v <= br.value + slack) {
        rows = std::move(trial);
        break;
      }
    }
  }
  return rows;
}

std::vector<std::vector<Index>> pure_matrix(const Game& game,
                                            const StrategyProfile& profile) {
  std::vector<std::vector<Index>> out(game.num_players());
  for (Index i = 0; i < game.num_players(); ++i) {
    out[i].resize(game.types[i].size());
    for (Index ti = 0; ti < game.types[i].size(); ++ti) {
      Index a = 0;
      if (!pure_row(profile.of(i).rows[ti], &a))
        throw InputError("profile is not pure");
      out[i][ti] = a;
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Profile labels
// ---------------------------------------------------------------------------

std::string profile_label(const Game& game,
                          const std::vector<std::vector<Index>>& actions) {
  if (actions.size() != game.num_players())
    throw InputError("profile label needs one action list per player");
  std::string out = "(";
  for (Index i = 0; i < actions.size(); ++i) {
    if (actions[i].size() != game.types[i].size())
      throw InputError("profile label needs one action per type");
    if (i) out += ",";
    for (Index ti = 0; ti < actions[i].size(); ++ti)
      out += game.actions[i].at(actions[i][ti]);
  }
  return out + ")";
}

std::vector<std::vector<Index>> parse_profile_label(const Game& game,
                                                    const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (!s.empty() && s.front() == '(' && s.back() == ')')
    s = s.substr(1, s.size() - 2);

  std::vector<std::string> blocks;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      blocks.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  blocks.push_back(cur);
  if (blocks.size() != game.num_players())
    throw InputError("profile '" + text + "' needs " +
                     std::to_string(game.num_players()) +
                     " comma-separated blocks");

  std::vector<std::vector<Index>> out(game.num_players());
  for (Index i = 0; i < blocks.size(); ++i) {
    // Greedy longest-label-first tokenisation of the block.
    std::vector<Index> order(game.actions[i].size());
    for (Index a = 0; a < order.size(); ++a) order[a] = a;
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
      return game.actions[i][a].size() > game.actions[i][b].size();
    });
    std::string rest = blocks[i];
    while (!rest.empty()) {
      bool matched = false;
      for (Index a : order) {
        const std::string& lab = game.actions[i][a];
        if (!lab.empty() && rest.rfind(lab, 0) == 0) {
          out[i].push_back(a);
          rest = rest.substr(lab.size());
          matched = true;
          break;
        }
      }
      if (!matched)
        throw InputError("cannot parse strategy block '" + blocks[i] +
                         "' for player " + std::to_string(i));
    }
    if (out[i].size() != game.types[i].size())
      throw InputError("strategy block '" + blocks[i] + "' names " +
                       std::to_string(out[i].size()) + " actions, expected " +
                       std::to_string(game.types[i].size()));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Best responses and ex ante equilibrium
// ---------------------------------------------------------------------------

BehavioralStrategy best_response_ex_ante(
    const Game& game, const std::vector<RiskMeasureSpec>& specs, Index player,
    const StrategyProfile& others) {
  check_specs(game, specs);
  BrSolution br =
      best_response_lp(game, specs[player], player, others, lp::PivotRule::Dantzig);
  auto rows = canonicalize(game, specs[player], player, others, br);
  return BehavioralStrategy::make(game, player, std::move(rows));
}

double best_response_value(const Game& game,
                           const std::vector<RiskMeasureSpec>& specs,
                           Index player, const StrategyProfile& others,
                           lp::PivotRule rule) {
  check_specs(game, specs);
  return best_response_lp(game, specs[player], player, others, rule).value;
}

EquilibriumCertificate check_rane(const Game& game,
                                  const std::vector<RiskMeasureSpec>& specs,
                                  const StrategyProfile& profile, double tol) {
  check_specs(game, specs);
  EquilibriumCertificate cert;
  cert.kind = "ex-ante";
  cert.profile = profile;
  cert.tol = tol;
  cert.equilibrium = true;
  for (Index i = 0; i < game.num_players(); ++i) {
    DeviationRecord rec;
    rec.player = i;
    rec.incumbent = evaluate(specs[i], average_loss(game, profile, i));
    BehavioralStrategy br = best_response_ex_ante(game, specs, i, profile);
    StrategyProfile swapped = profile;
    swapped.strategies[i] = br;
    rec.best_deviation = evaluate(specs[i], average_loss(game, swapped, i));
    rec.gain = rec.incumbent - rec.best_deviation;
    rec.deviation_label = strategy_text(game, i, br);
    if (rec.gain > tol) cert.equilibrium = false;
    cert.records.push_back(std::move(rec));
  }
  return cert;
}

std::vector<PureProfileRecord> solve_rane_pure(
    const Game& game, const std::vector<RiskMeasureSpec>& specs, double tol,
    std::uint64_t cap) {
  check_specs(game, specs);
  // Count pure profiles, bailing out beyond the cap.
  std::uint64_t count = 1;
  for (Index i = 0; i < game.num_players(); ++i) {
    for (Index ti = 0; ti < game.types[i].size(); ++ti) {
      count *= game.actions[i].size();
      if (count > cap)
        throw InputError("pure profile enumeration exceeds the cap of " +
                         std::to_string(cap) + " profiles");
    }
  }

  std::vector<PureProfileRecord> out;
  std::vector<std::vector<Index>> actions(game.num_players());
  for (Index i = 0; i < game.num_players(); ++i)
    actions[i].assign(game.types[i].size(), 0);

  while (true) {
    PureProfileRecord rec;
    rec.actions = actions;
    rec.label = profile_label(game, actions);
    StrategyProfile profile = StrategyProfile::pure(game, actions);
    rec.certificate = check_rane(game, specs, profile, tol);
    for (Index i = 0; i < game.num_players(); ++i)
      rec.risks.push_back(rec.certificate.records[i].incumbent);

    // Coarser verdict: only whole pure strategies as deviations.
    rec.pure_equilibrium = true;
    for (Index i = 0; i < game.num_players() && rec.pure_equilibrium; ++i) {
      const std::vector<double> K = action_kernel(game, i, profile);
      std::vector<Index> alt(game.types[i].size(), 0);
      while (true) {
        std::vector<std::vector<double>> rows(game.types[i].size());
        for (Index ti = 0; ti < alt.size(); ++ti) {
          rows[ti].assign(game.actions[i].size(), 0.0);
          rows[ti][alt[ti]] = 1.0;
        }
        double v = evaluate(specs[i], loss_from_rows(game, i, K, rows));
        if (rec.risks[i] - v > tol) {
          rec.pure_equilibrium = false;
          break;
        }
        Index d = 0;
        while (d < alt.size() && ++alt[d] == game.actions[i].size()) {
          alt[d] = 0;
          ++d;
        }
        if (d == alt.size()) break;
      }
    }
    out.push_back(std::move(rec));

    // Odometer over (player, type) digits.
    Index i = 0, ti = 0;
    bool carried = true;
    while (carried) {
      if (++actions[i][ti] < game.actions[i].size()) {
        carried = false;
        break;
      }
      actions[i][ti] = 0;
      if (++ti == game.types[i].size()) {
        ti = 0;
        if (++i == game.num_players()) return out;
      }
    }
  }
}

StrategyProfile solve_rane_mixed(const Game& game,
                                 const std::vector<RiskMeasureSpec>& specs,
                                 const IterationConfig& config) {
  check_specs(game, specs);
  if (!(config.damping > 0))
    throw InputError("damping must be positive");

  // Starting point: uniform rows, or random rows when seeded.
  std::vector<BehavioralStrategy> strategies;
  Rng rng(config.seed);
  for (Index i = 0; i < game.num_players(); ++i) {
    std::vector<std::vector<double>> rows(game.types[i].size());
    for (auto& row : rows) {
      if (config.seed == 0)
        row.assign(game.actions[i].size(),
                   1.0 / static_cast<double>(game.actions[i].size()));
      else
        row = rng.simplex(game.actions[i].size());
    }
    strategies.push_back(BehavioralStrategy::make(game, i, std::move(rows)));
  }
  StrategyProfile current = StrategyProfile::make(game, strategies);

  auto converged = [&](const StrategyProfile& p) {
    return check_rane(game, specs, p, config.tol).equilibrium;
  };

  for (int k = 0; k < config.max_iters; ++k) {
    // Certificates are costly, so probe on a geometric schedule.
    if ((k & (k - 1)) == 0 && converged(current)) return current;

    double step = config.damping / (config.damping + static_cast<double>(k));
    std::vector<BehavioralStrategy> responses;
    for (Index i = 0; i < game.num_players(); ++i)
      responses.push_back(best_response_ex_ante(game, specs, i, current));
    for (Index i = 0; i < game.num_players(); ++i) {
      auto& rows = current.strategies[i].rows;
      for (Index ti = 0; ti < rows.size(); ++ti)
        for (Index a = 0; a < rows[ti].size(); ++a)
          rows[ti][a] = (1.0 - step) * rows[ti][a] +
                        step * responses[i].rows[ti][a];
    }
  }
  if (converged(current)) return current;
  throw NumericError("iterated best response did not converge within " +
                     std::to_string(config.max_iters) + " iterations");
}

// ---------------------------------------------------------------------------
// Interim equilibrium without revision
// ---------------------------------------------------------------------------

namespace {

// Unrevised interim value: the ex ante measure applied to the conditional
// loss distribution on one cell.  Polytope sets have no law-invariant
// conditional form, so they go through the constrained LP with unit weights.
double interim_value(const Game& game, const RiskMeasureSpec& spec,
                     const RandomLoss& loss,
                     const InformationPartition& partition, Index own_type) {
  if (spec.kind == RiskKind::PolytopeDual) {
    ConditionalDual unit;
    unit.owner = partition.owner;
    unit.weights.assign(partition.cells.size(), 1.0);
    return conditional_evaluate(spec, unit, loss, partition, own_type);
  }
  return evaluate(spec, restrict_loss(loss, partition, own_type));
}

// Interim best response of one type over mixed rows, by LP on the cell.
double interim_mixed_best(const Game& game, const RiskMeasureSpec& spec,
                          Index player, const std::vector<double>& K,
                          const InformationPartition& partition,
                          Index own_type) {
  if (spec.kind == RiskKind::PolytopeDual)
    throw InputError(
        "mixed interim deviations are not defined for polytope sets");
  const Index nA = game.actions[player].size();
  const auto& cell = partition.cells.at(own_type);
  double mass = 0;
  for (Index t : cell) mass += game.prior[t];
  if (!(mass > 0))
    throw InputError("zero-mass type: interim deviation undefined");

  lp::LinearProgram prog;
  prog.sense = lp::Sense::Minimize;
  std::vector<Index> x(nA);
  for (Index a = 0; a < nA; ++a) x[a] = prog.add_variable(0.0, 0.0, 1.0);
  {
    std::vector<std::pair<Index, double>> row;
    for (Index a = 0; a < nA; ++a) row.push_back({x[a], 1.0});
    prog.add_row(std::move(row), lp::Rel::Eq, 1.0);
  }

  auto add_epigraph = [&](double weight, double cap) {
    Index eta = prog.add_variable(weight, -lp::kInf, lp::kInf);
    for (Index t : cell) {
      double p = game.prior[t] / mass;
      if (p <= 0) continue;
      std::vector<std::pair<Index, double>> row{{eta, 1.0}};
      if (cap != lp::kInf) {
        Index s = prog.add_variable(weight * cap * p, 0.0, lp::kInf);
        row.push_back({s, 1.0});
      }
      for (Index a = 0; a < nA; ++a) {
        double k = K[t * nA + a];
        if (k != 0) row.push_back({x[a], -k});
      }
      prog.add_row(std::move(row), lp::Rel::Ge, 0.0);
    }
  };

  switch (spec.kind) {
    case RiskKind::Expectation: {
      for (Index a = 0; a < nA; ++a) {
        double c = 0;
        for (Index t : cell) c += game.prior[t] / mass * K[t * nA + a];
        prog.objective[x[a]] = c;
      }
      break;
    }
    case RiskKind::AVaR:
      add_epigraph(1.0, spec.cap());
      break;
    case RiskKind::EssentialSup:
      add_epigraph(1.0, lp::kInf);
      break;
    case RiskKind::SpectralMixture:
      for (auto [w, cap] : spectral_caps(spec)) add_epigraph(w, cap);
      break;
    case RiskKind::PolytopeDual:
      break;  // unreachable
  }

  lp::Solution sol = lp::solve(prog);
  if (sol.status != lp::Status::Optimal)
    throw NumericError("interim best-response LP did not reach an optimum");
  return sol.objective;
}

// The revised measure of one cell as a standalone spec, usable wherever the
// unrevised machinery takes one.  Expectation and worst-case sources keep
// their kind (their conditional forms are the cell mean and the cell
// supremum); tail averages move to the revised level, a zero weight
// degenerating to the cell supremum.  Spectral and polytope sources have no
// single-level conditional form.
RiskMeasureSpec revised_cell_measure(const RiskMeasureSpec& source, double z) {
  switch (source.kind) {
    case RiskKind::Expectation:
    case RiskKind::EssentialSup:
      return source;
    case RiskKind::AVaR:
      return RiskMeasureSpec::avar(revised_level(source, z));
    case RiskKind::SpectralMixture:
    case RiskKind::PolytopeDual:
      break;
  }
  throw InputError(
      "mixed interim deviations under a revision are supported for "
      "expectation, tail-average, and worst-case sources only; got " +
      source.describe());
}

}  // namespace

EquilibriumCertificate check_rabne(const Game& game,
                                   const std::vector<RiskMeasureSpec>& specs,
                                   const StrategyProfile& profile, double tol,
                                   bool mixed_deviations) {
  check_specs(game, specs);
  EquilibriumCertificate cert;
  cert.kind = "interim-unrevised";
  cert.profile = profile;
  cert.tol = tol;
  cert.equilibrium = true;
  for (Index i = 0; i < game.num_players(); ++i) {
    InformationPartition part = InformationPartition::of_player(game, i);
    const std::vector<double> K = action_kernel(game, i, profile);
    RandomLoss incumbent_loss = loss_from_rows(game, i, K, profile.of(i).rows);
    for (Index ti = 0; ti < game.types[i].size(); ++ti) {
      DeviationRecord rec;
      rec.player = i;
      rec.own_type = ti;
      rec.incumbent = interim_value(game, specs[i], incumbent_loss, part, ti);
      rec.best_deviation = std::numeric_limits<double>::infinity();
      for (Index a = 0; a < game.actions[i].size(); ++a) {
        double v = interim_value(game, specs[i],
                                 loss_from_action(game, i, K, a), part, ti);
        if (v < rec.best_deviation) {
          rec.best_deviation = v;
          rec.deviation_label = game.actions[i][a];
        }
      }
      if (mixed_deviations) {
        double v = interim_mixed_best(game, specs[i], i, K, part, ti);
        if (v < rec.best_deviation - kValueTol) {
          rec.best_deviation = v;
          rec.deviation_label = "mixed";
        }
      }
      rec.gain = rec.incumbent - rec.best_deviation;
      if (rec.gain > tol) cert.equilibrium = false;
      cert.records.push_back(std::move(rec));
    }
  }
  return cert;
}

// ---------------------------------------------------------------------------
// Revision and interim equilibrium with revision
// ---------------------------------------------------------------------------

RevisionProfile build_revision(
    const Game& game, const std::vector<RiskMeasureSpec>& specs,
    const StrategyProfile& inducing,
    const std::vector<std::optional<DualDensity>>& overrides) {
  check_specs(game, specs);
  if (!overrides.empty() && overrides.size() != game.num_players())
    throw InputError("expected one dual override slot per player");

  RevisionProfile rev;
  rev.inducing = inducing;
  rev.sources = specs;
  for (Index i = 0; i < game.num_players(); ++i) {
    RandomLoss loss = average_loss(game, inducing, i);
    DualDensity dual;
    if (!overrides.empty() && overrides[i].has_value()) {
      dual = *overrides[i];
      if (dual.values.size() != loss.size())
        throw InputError("dual override for player " + std::to_string(i) +
                         " has wrong length");
      if (!is_dual_feasible(specs[i], loss.probs, dual))
        throw InputError("dual override for player " + std::to_string(i) +
                         " is not in the dual set of " + specs[i].describe());
      if (!is_dual_optimal(specs[i], loss, dual)) {
        double attained = 0;
        for (Index t = 0; t < loss.size(); ++t)
          attained += loss.probs[t] * dual.values[t] * loss.values[t];
        double best = evaluate(specs[i], loss);
        std::ostringstream os;
        os << "dual override for player " << i
           << " is feasible but not optimal: attains " << attained
           << " against the risk value " << best << " (gap "
           << (best - attained) << ")";
        throw InputError(os.str());
      }
    } else {
      dual = optimal_dual(specs[i], loss);
    }
    InformationPartition part = InformationPartition::of_player(game, i);
    ConditionalDual cond = project_dual(dual, part, loss.probs);
    std::vector<RevisedInterimMeasure> interim;
    for (Index ti = 0; ti < game.types[i].size(); ++ti)
      interim.push_back(revise_interim(specs[i], cond, ti));
    rev.duals.push_back(std::move(dual));
    rev.conditionals.push_back(std::move(cond));
    rev.interim.push_back(std::move(interim));
  }
  return rev;
}

RevisionProfile unrevised_revision(const Game& game,
                                   const std::vector<RiskMeasureSpec>& specs,
                                   const StrategyProfile& inducing) {
  check_specs(game, specs);
  RevisionProfile rev;
  rev.inducing = inducing;
  rev.sources = specs;
  for (Index i = 0; i < game.num_players(); ++i) {
    DualDensity dual;
    dual.values.assign(game.num_type_profiles(), 1.0);
    InformationPartition part = InformationPartition::of_player(game, i);
    ConditionalDual cond;
    cond.owner = i;
    cond.weights.assign(game.types[i].size(), 1.0);
    std::vector<RevisedInterimMeasure> interim;
    for (Index ti = 0; ti < game.types[i].size(); ++ti)
      interim.push_back(revise_interim(specs[i], cond, ti));
    rev.duals.push_back(std::move(dual));
    rev.conditionals.push_back(std::move(cond));
    rev.interim.push_back(std::move(interim));
  }
  return rev;
}

EquilibriumCertificate check_rrbne(const Game& game,
                                   const RevisionProfile& revision,
                                   const StrategyProfile& profile, double tol,
                                   bool mixed_deviations) {
  check_specs(game, revision.sources);
  EquilibriumCertificate cert;
  cert.kind = "interim-revised";
  cert.profile = profile;
  cert.tol = tol;
  cert.equilibrium = true;
  for (Index i = 0; i < game.num_players(); ++i) {
    const RiskMeasureSpec& spec = revision.sources[i];
    const ConditionalDual& cond = revision.conditionals[i];
    InformationPartition part = InformationPartition::of_player(game, i);
    const std::vector<double> K = action_kernel(game, i, profile);
    RandomLoss incumbent_loss = loss_from_rows(game, i, K, profile.of(i).rows);
    for (Index ti = 0; ti < game.types[i].size(); ++ti) {
      DeviationRecord rec;
      rec.player = i;
      rec.own_type = ti;
      rec.incumbent =
          conditional_evaluate(spec, cond, incumbent_loss, part, ti);
      rec.best_deviation = std::numeric_limits<double>::infinity();
      for (Index a = 0; a < game.actions[i].size(); ++a) {
        double v = conditional_evaluate(
            spec, cond, loss_from_action(game, i, K, a), part, ti);
        if (v < rec.best_deviation) {
          rec.best_deviation = v;
          rec.deviation_label = game.actions[i][a];
        }
      }
      if (mixed_deviations) {
        RiskMeasureSpec eff = revised_cell_measure(spec, cond.weights.at(ti));
        double v = interim_mixed_best(game, eff, i, K, part, ti);
        if (v < rec.best_deviation - kValueTol) {
          rec.best_deviation = v;
          rec.deviation_label = "mixed";
        }
      }
      rec.gain = rec.incumbent - rec.best_deviation;
      if (rec.gain > tol) cert.equilibrium = false;
      cert.records.push_back(std::move(rec));
    }
  }
  return cert;
}

// ---------------------------------------------------------------------------
// Revision-preference consistency
// ---------------------------------------------------------------------------

namespace {

std::vector<double> interim_values_under(const Game& game,
                                         const RiskMeasureSpec& spec,
                                         const ConditionalDual& cond,
                                         const RandomLoss& loss,
                                         const InformationPartition& part) {
  std::vector<double> out(part.cells.size());
  for (Index c = 0; c < part.cells.size(); ++c)
    out[c] = conditional_evaluate(spec, cond, loss, part, c);
  return out;
}

}  // namespace

RprcReport check_rprc(
    const Game& game, const std::vector<RiskMeasureSpec>& specs, Index player,
    const std::vector<std::pair<std::vector<std::vector<Index>>,
                                std::vector<std::vector<Index>>>>& pairs,
    RprcMode mode, double tol) {
  check_specs(game, specs);
  const RiskMeasureSpec& spec = specs[player];
  InformationPartition part = InformationPartition::of_player(game, player);
  RprcReport rep;
  rep.player = player;
  rep.mode = mode;

  for (const auto& [first, second] : pairs) {
    StrategyProfile pf = StrategyProfile::pure(game, first);
    StrategyProfile ps = StrategyProfile::pure(game, second);
    RandomLoss lf = average_loss(game, pf, player);
    RandomLoss ls = average_loss(game, ps, player);
    ConditionalDual zf =
        project_dual(optimal_dual(spec, lf), part, game.prior);
    ConditionalDual zs =
        project_dual(optimal_dual(spec, ls), part, game.prior);

    std::vector<double> v1 = interim_values_under(game, spec, zs, lf, part);
    std::vector<double> v2 = interim_values_under(game, spec, zs, ls, part);
    std::vector<double> w1 = interim_values_under(game, spec, zf, lf, part);
    std::vector<double> w2 = interim_values_under(game, spec, zf, ls, part);

    RprcPairRecord rec;
    rec.first = first;
    rec.second = second;

    bool strict_everywhere = true, weak_everywhere = true, strict_somewhere = false;
    for (Index c = 0; c < part.cells.size(); ++c) {
      if (!(v1[c] + tol < v2[c])) strict_everywhere = false;
      else strict_somewhere = true;
      if (!(v1[c] <= v2[c] + tol)) weak_everywhere = false;
    }
    rec.applicable = (mode == RprcMode::Strict)
                         ? strict_everywhere
                         : (weak_everywhere && strict_somewhere);
    rec.holds = true;
    if (rec.applicable) {
      for (Index c = 0; c < part.cells.size(); ++c) {
        bool premise_strict_here = v1[c] + tol < v2[c];
        bool need_strict = (mode == RprcMode::Strict) || premise_strict_here;
        bool ok = need_strict ? (w1[c] < w2[c] + tol) : (w1[c] <= w2[c] + tol);
        if (!ok) rec.holds = false;
      }
    }

    std::ostringstream os;
    os << profile_label(game, first) << " vs " << profile_label(game, second)
       << ": premise cells";
    for (Index c = 0; c < part.cells.size(); ++c)
      os << " [" << v1[c] << (v1[c] + tol < v2[c] ? " < " : " !< ") << v2[c]
         << "]";
    os << "; conclusion cells";
    for (Index c = 0; c < part.cells.size(); ++c)
      os << " [" << w1[c] << (w1[c] < w2[c] + tol ? " < " : " !< ") << w2[c]
         << "]";
    rec.detail = os.str();

    ++rep.checked;
    if (rec.applicable) ++rep.applicable;
    if (rec.applicable && !rec.holds) ++rep.violations;
    rep.records.push_back(std::move(rec));
  }
  return rep;
}

namespace {

std::vector<std::vector<Index>> random_pure_matrix(const Game& game, Rng& rng) {
  std::vector<std::vector<Index>> actions(game.num_players());
  for (Index i = 0; i < game.num_players(); ++i) {
    actions[i].resize(game.types[i].size());
    for (auto& a : actions[i]) a = rng.below(game.actions[i].size());
  }
  return actions;
}

}  // namespace

RprcReport check_rprc_sampled(const Game& game,
                              const std::vector<RiskMeasureSpec>& specs,
                              Index player, int num_pairs, std::uint64_t seed,
                              RprcMode mode, double tol) {
  Rng rng(seed);
  std::vector<std::pair<std::vector<std::vector<Index>>,
                        std::vector<std::vector<Index>>>>
      pairs;
  for (int k = 0; k < num_pairs; ++k) {
    auto a = random_pure_matrix(game, rng);
    auto b = random_pure_matrix(game, rng);
    for (int tries = 0; a == b && tries < 16; ++tries)
      b = random_pure_matrix(game, rng);
    if (a == b) continue;
    pairs.push_back({std::move(a), std::move(b)});
  }
  return check_rprc(game, specs, player, pairs, mode, tol);
}

// ---------------------------------------------------------------------------
// Implication verifiers
// ---------------------------------------------------------------------------

ImplicationReport verify_rrbne_implies_rane(
    const Game& game, const std::vector<RiskMeasureSpec>& specs,
    const StrategyProfile& profile, double tol) {
  check_specs(game, specs);
  ImplicationReport rep;
  rep.kind = "rrbne-implies-rane";
  rep.label = "hypothesis checked against mixed cell deviations";
  RevisionProfile rev = build_revision(game, specs, profile);
  rep.antecedent =
      check_rrbne(game, rev, profile, tol, /*mixed_deviations=*/true);
  rep.consequent = check_rane(game, specs, profile, tol);
  rep.premises_hold = true;
  rep.applicable = rep.antecedent.equilibrium;
  rep.implication_ok = !rep.applicable || rep.consequent.equilibrium;
  return rep;
}

ImplicationReport verify_rane_implies_rrbne(
    const Game& game, const std::vector<RiskMeasureSpec>& specs,
    const StrategyProfile& profile, double tol, int sampled_profiles,
    int sampled_pairs, std::uint64_t seed) {
  check_specs(game, specs);
  ImplicationReport rep;
  rep.kind = "rane-implies-rrbne";
  rep.label = "premises sampled, not proven";
  rep.premises_hold = true;

  if (!game.fully_supported()) {
    rep.premises_hold = false;
    rep.premise_notes.push_back("prior is not fully supported");
  }

  // Positive projected weights for the candidate, its one-action deviations,
  // and a sample of random pure profiles.
  auto weights_positive = [&](const StrategyProfile& p, const std::string& who) {
    bool ok = true;
    for (Index i = 0; i < game.num_players() && ok; ++i) {
      RandomLoss loss = average_loss(game, p, i);
      ConditionalDual cond =
          project_dual(optimal_dual(specs[i], loss),
                       InformationPartition::of_player(game, i), loss.probs);
      for (Index ti = 0; ti < cond.weights.size(); ++ti) {
        if (cond.weights[ti] <= 1e-12) {
          rep.premise_notes.push_back(
              who + ": projected weight vanishes for player " +
              std::to_string(i) + ", type " + std::to_string(ti));
          ok = false;
          break;
        }
      }
    }
    return ok;
  };

  if (!weights_positive(profile, "candidate")) rep.premises_hold = false;

  std::vector<std::pair<std::vector<std::vector<Index>>,
                        std::vector<std::vector<Index>>>>
      proof_pairs;
  bool candidate_pure = true;
  std::vector<std::vector<Index>> base;
  try {
    base = pure_matrix(game, profile);
  } catch (const InputError&) {
    candidate_pure = false;
  }

  for (Index i = 0; i < game.num_players(); ++i) {
    for (Index ti = 0; ti < game.types[i].size(); ++ti) {
      for (Index a = 0; a < game.actions[i].size(); ++a) {
        StrategyProfile dev = profile;
        std::vector<std::vector<double>> rows = dev.of(i).rows;
        if (candidate_pure && base[i][ti] == a) continue;
        rows[ti].assign(game.actions[i].size(), 0.0);
        rows[ti][a] = 1.0;
        dev.strategies[i] = BehavioralStrategy::make(game, i, rows);
        if (!weights_positive(dev, "one-action deviation")) {
          rep.premises_hold = false;
        }
        if (candidate_pure) {
          auto devm = base;
          devm[i][ti] = a;
          proof_pairs.push_back({devm, base});
        }
      }
    }
  }

  Rng rng(seed);
  for (int k = 0; k < sampled_profiles; ++k) {
    auto m = random_pure_matrix(game, rng);
    if (!weights_positive(StrategyProfile::pure(game, m), "sampled profile"))
      rep.premises_hold = false;
  }

  // Revision-preference consistency on the proof-pattern pairs plus random
  // pairs, in the weak-dominance form the implication argument uses.
  for (Index i = 0; i < game.num_players(); ++i) {
    if (candidate_pure && !proof_pairs.empty()) {
      RprcReport r = check_rprc(game, specs, i, proof_pairs,
                                RprcMode::WeakDominance, tol);
      if (!r.passed()) {
        rep.premises_hold = false;
        for (const auto& rec : r.records)
          if (rec.applicable && !rec.holds)
            rep.premise_notes.push_back("consistency violated for player " +
                                        std::to_string(i) + ": " + rec.detail);
      }
    }
    RprcReport r = check_rprc_sampled(game, specs, i, sampled_pairs,
                                      seed + 17 * (i + 1),
                                      RprcMode::WeakDominance, tol);
    if (!r.passed()) {
      rep.premises_hold = false;
      for (const auto& rec : r.records)
        if (rec.applicable && !rec.holds)
          rep.premise_notes.push_back("consistency violated for player " +
                                      std::to_string(i) + ": " + rec.detail);
    }
  }

  rep.antecedent = check_rane(game, specs, profile, tol);
  RevisionProfile rev = build_revision(game, specs, profile);
  rep.consequent = check_rrbne(game, rev, profile, tol);
  rep.applicable = rep.premises_hold && rep.antecedent.equilibrium;
  rep.implication_ok = !rep.applicable || rep.consequent.equilibrium;
  return rep;
}

DominanceReport check_weighted_average_dominance(
    const Game& game, const std::vector<RiskMeasureSpec>& specs, Index player,
    const StrategyProfile& favoured, const StrategyProfile& rival,
    double tol) {
  check_specs(game, specs);
  const RiskMeasureSpec& spec = specs[player];
  InformationPartition part = InformationPartition::of_player(game, player);
  RandomLoss lf = average_loss(game, favoured, player);
  RandomLoss lr = average_loss(game, rival, player);
  ConditionalDual zf = project_dual(optimal_dual(spec, lf), part, game.prior);
  ConditionalDual zr = project_dual(optimal_dual(spec, lr), part, game.prior);

  DominanceReport rep;
  rep.player = player;
  rep.favoured_under_rival = weighted_interim_average(spec, zr, lf, part);
  rep.rival_under_rival = weighted_interim_average(spec, zr, lr, part);
  rep.favoured_under_own = weighted_interim_average(spec, zf, lf, part);
  rep.rival_under_own = weighted_interim_average(spec, zf, lr, part);
  rep.ex_ante_favoured = evaluate(spec, lf);
  rep.ex_ante_rival = evaluate(spec, lr);
  rep.premise = rep.favoured_under_rival > rep.rival_under_rival + tol;
  rep.conclusion = rep.favoured_under_own > rep.rival_under_own - tol;
  rep.pass = !rep.premise || rep.conclusion;
  return rep;
}

// ---------------------------------------------------------------------------
// Risk-neutral equivalents and beliefs
// ---------------------------------------------------------------------------

std::vector<std::vector<double>> risk_neutral_equivalent(
    const Game& game, const std::vector<RiskMeasureSpec>& specs,
    const StrategyProfile& profile) {
  check_specs(game, specs);
  std::vector<std::vector<double>> out;
  for (Index i = 0; i < game.num_players(); ++i) {
    RandomLoss loss = average_loss(game, profile, i);
    DualDensity dual = optimal_dual(specs[i], loss);
    std::vector<double> q(loss.size());
    double inner = 0;
    for (Index t = 0; t < loss.size(); ++t) {
      q[t] = loss.probs[t] * dual.values[t];
      inner += q[t] * loss.values[t];
    }
    double rho = evaluate(specs[i], loss);
    if (std::abs(inner - rho) > 1e-9)
      throw NumericError(
          "risk-neutral equivalent failed to reproduce the risk value: " +
          std::to_string(inner) + " vs " + std::to_string(rho));
    out.push_back(std::move(q));
  }
  return out;
}

BeliefSystem beliefs_from_prior(const Game& game) {
  BeliefSystem bs;
  for (Index i = 0; i < game.num_players(); ++i)
    bs.type_counts.push_back(game.types[i].size());
  bs.beliefs.resize(game.num_players());
  for (Index i = 0; i < game.num_players(); ++i)
    for (Index ti = 0; ti < game.types[i].size(); ++ti)
      bs.beliefs[i].push_back(conditional_distribution(game, i, ti));
  return bs;
}

ConsistencyReport check_belief_consistency(
    const BeliefSystem& beliefs, const std::vector<std::vector<Index>>& live) {
  const Index n_players = beliefs.type_counts.size();
  if (beliefs.beliefs.size() != n_players)
    throw InputError("belief system needs one belief table per player");
  ProfileSpace full(beliefs.type_counts);

  std::vector<ProfileSpace> opp(n_players);
  for (Index i = 0; i < n_players; ++i) {
    opp[i] = ProfileSpace(sizes_without(beliefs.type_counts, i));
    if (beliefs.beliefs[i].size() != beliefs.type_counts[i])
      throw InputError("belief table for player " + std::to_string(i) +
                       " has the wrong number of types");
    for (const auto& b : beliefs.beliefs[i]) {
      if (b.size() != opp[i].total)
        throw InputError("belief row for player " + std::to_string(i) +
                         " has the wrong length");
      double s = 0;
      for (double v : b) {
        if (v < -kProbTol)
          throw InputError("belief row has a negative entry");
        s += v;
      }
      if (std::abs(s - 1.0) > 1e-9)
        throw InputError("belief row does not sum to one");
    }
  }

  std::vector<std::vector<Index>> live_types(n_players);
  if (live.empty()) {
    for (Index i = 0; i < n_players; ++i)
      for (Index ti = 0; ti < beliefs.type_counts[i]; ++ti)
        live_types[i].push_back(ti);
  } else {
    if (live.size() != n_players)
      throw InputError("live-type list needs one entry per player");
    live_types = live;
  }

  // Feasibility LP: find a prior matching every belief row by conditioning,
  // maximising the smallest live-type mass.
  lp::LinearProgram prog;
  prog.sense = lp::Sense::Maximize;
  std::vector<Index> P(full.total);
  for (Index t = 0; t < full.total; ++t)
    P[t] = prog.add_variable(0.0, 0.0, lp::kInf);
  Index delta = prog.add_variable(1.0, 0.0, lp::kInf);

  {
    std::vector<std::pair<Index, double>> row;
    for (Index t = 0; t < full.total; ++t) row.push_back({P[t], 1.0});
    prog.add_row(std::move(row), lp::Rel::Eq, 1.0);
  }

  for (Index i = 0; i < n_players; ++i) {
    for (Index ti = 0; ti < beliefs.type_counts[i]; ++ti) {
      const auto& b = beliefs.beliefs[i][ti];
      for (Index o = 0; o < opp[i].total; ++o) {
        // P(ti, o) = b(o) * sum_{o'} P(ti, o').
        std::vector<std::pair<Index, double>> row;
        for (Index o2 = 0; o2 < opp[i].total; ++o2) {
          double coef = (o2 == o ? 1.0 : 0.0) - b[o];
          if (coef != 0)
            row.push_back({P[insert_coordinate(full, opp[i], i, ti, o2)], coef});
        }
        if (!row.empty()) prog.add_row(std::move(row), lp::Rel::Eq, 0.0);
      }
    }
  }

  for (Index i = 0; i < n_players; ++i) {
    for (Index ti : live_types[i]) {
      if (ti >= beliefs.type_counts[i])
        throw InputError("live type index out of range");
      std::vector<std::pair<Index, double>> row{{delta, -1.0}};
      for (Index o = 0; o < opp[i].total; ++o)
        row.push_back({P[insert_coordinate(full, opp[i], i, ti, o)], 1.0});
      prog.add_row(std::move(row), lp::Rel::Ge, 0.0);
    }
  }

  ConsistencyReport rep;
  lp::Solution sol = lp::solve(prog);
  if (sol.status == lp::Status::Infeasible) return rep;
  if (sol.status != lp::Status::Optimal)
    throw NumericError("belief consistency LP did not reach an optimum");
  rep.min_live_margin = sol.objective;
  if (sol.objective <= kValueTol) return rep;

  rep.consistent = true;
  rep.prior.resize(full.total);
  double total = 0;
  for (Index t = 0; t < full.total; ++t) {
    rep.prior[t] = std::max(0.0, sol.x[P[t]]);
    total += rep.prior[t];
  }
  for (double& v : rep.prior) v /= total;
  return rep;
}

// ---------------------------------------------------------------------------
// Commonization
// ---------------------------------------------------------------------------

CommonizationReport commonize(const Game& game, const BeliefSystem& beliefs,
                              const StrategyProfile& profile,
                              const std::vector<double>& prior) {
  if (beliefs.type_counts.size() != game.num_players())
    throw InputError("belief system does not match the game's player count");
  for (Index i = 0; i < game.num_players(); ++i)
    if (beliefs.type_counts[i] != game.types[i].size())
      throw InputError("belief system does not match the game's type counts");

  CommonizationReport rep;
  if (prior.empty()) {
    rep.prior.assign(game.num_type_profiles(),
                     1.0 / static_cast<double>(game.num_type_profiles()));
  } else {
    if (prior.size() != game.num_type_profiles())
      throw InputError("reference prior has the wrong length");
    double s = 0;
    for (double v : prior) {
      if (v < -kProbTol) throw InputError("reference prior has a negative entry");
      s += v;
    }
    if (std::abs(s - 1.0) > 1e-9)
      throw InputError("reference prior does not sum to one");
    rep.prior = prior;
  }

  rep.pass = true;
  for (Index i = 0; i < game.num_players(); ++i) {
    ProfileSpace opp(sizes_without(game.type_space.sizes, i));
    RandomLoss avg = average_loss(game, profile, i);
    for (Index ti = 0; ti < game.types[i].size(); ++ti) {
      const auto& b = beliefs.beliefs.at(i).at(ti);
      if (b.size() != opp.total)
        throw InputError("belief row has the wrong length");

      CommonizedType ct;
      ct.player = i;
      ct.own_type = ti;
      ct.belief = b;
      ct.interim_loss.resize(opp.total);
      for (Index o = 0; o < opp.total; ++o)
        ct.interim_loss[o] =
            avg.values[insert_coordinate(game.type_space, opp, i, ti, o)];

      double expected = 0, lowest = ct.interim_loss.empty()
                                        ? 0.0
                                        : ct.interim_loss[0];
      Index argmin = 0;
      for (Index o = 0; o < opp.total; ++o) {
        expected += b[o] * ct.interim_loss[o];
        if (ct.interim_loss[o] < lowest) {
          lowest = ct.interim_loss[o];
          argmin = o;
        }
      }

      double tol = kValueTol * std::max(1.0, std::abs(expected));
      // The set stays {b} exactly when b already sits on the minimisers,
      // because then no belief has strictly lower expected loss.
      ct.singleton = expected <= lowest + tol;
      double worst = expected;
      if (!ct.singleton) {
        ct.improving_direction.assign(opp.total, 0.0);
        ct.improving_direction[argmin] = 1.0;
        worst = std::max(expected, lowest);
      }
      ct.attained = worst;
      ct.attainment_ok = std::abs(worst - expected) <= tol;

      // Support of b must sit inside the support of the reference prior's
      // conditional on this type.
      ct.support_ok = true;
      for (Index o = 0; o < opp.total; ++o) {
        double mass =
            rep.prior[insert_coordinate(game.type_space, opp, i, ti, o)];
        if (b[o] > kProbTol && !(mass > 0)) ct.support_ok = false;
      }

      if (!ct.attainment_ok || !ct.support_ok) rep.pass = false;
      rep.types.push_back(std::move(ct));
    }
  }
  return rep;
}

}  // namespace riskgame
