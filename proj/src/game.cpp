#include "riskgame/game.hpp"

#include <cmath>
#include <numeric>
#include <utility>

namespace riskgame {

ProfileSpace::ProfileSpace(std::vector<Index> per_player)
    : sizes(std::move(per_player)) {
  total = 1;
  for (Index n : sizes) {
    if (n == 0) throw InputError("profile space has an empty coordinate set");
    total *= n;
  }
}

Index ProfileSpace::flatten(const std::vector<Index>& coords) const {
  if (coords.size() != sizes.size())
    throw InputError("profile coordinate count mismatch");
  Index flat = 0;
  for (Index i = 0; i < sizes.size(); ++i) {
    if (coords[i] >= sizes[i]) throw InputError("profile coordinate out of range");
    flat = flat * sizes[i] + coords[i];
  }
  return flat;
}

std::vector<Index> ProfileSpace::unflatten(Index flat) const {
  std::vector<Index> coords(sizes.size());
  for (Index i = sizes.size(); i-- > 0;) {
    coords[i] = flat % sizes[i];
    flat /= sizes[i];
  }
  return coords;
}

Index ProfileSpace::coordinate(Index flat, Index player) const {
  // Strip the digits inner to `player`, then take the remainder.
  for (Index i = sizes.size(); i-- > player + 1;) flat /= sizes[i];
  return flat % sizes[player];
}

Index ProfileSpace::replace(Index flat, Index player, Index value) const {
  Index stride = 1;
  for (Index i = sizes.size(); i-- > player + 1;) stride *= sizes[i];
  Index old = coordinate(flat, player);
  return flat + (value - old) * stride;  // Index arithmetic wraps safely: value<size
}

double RandomLoss::mean() const {
  double m = 0;
  for (Index k = 0; k < values.size(); ++k) m += probs[k] * values[k];
  return m;
}

namespace {

void check_probability_vector(const std::vector<double>& p,
                              const std::string& what) {
  double sum = 0;
  for (double x : p) {
    if (!(x >= 0)) throw InputError(what + " has a negative entry");
    if (!std::isfinite(x)) throw InputError(what + " has a non-finite entry");
    sum += x;
  }
  if (std::abs(sum - 1.0) > kProbTol)
    throw InputError(what + " not normalized (sums to " + std::to_string(sum) + ")");
}

}  // namespace

Game Game::make(std::vector<std::string> players,
                std::vector<std::vector<std::string>> types,
                std::vector<std::vector<std::string>> actions,
                std::vector<double> prior,
                std::vector<std::vector<double>> losses) {
  Game g;
  g.players = std::move(players);
  g.types = std::move(types);
  g.actions = std::move(actions);
  g.prior = std::move(prior);
  g.losses = std::move(losses);

  const Index n = g.players.size();
  if (n < 1) throw InputError("game needs at least one player");
  if (g.types.size() != n || g.actions.size() != n)
    throw InputError("types/actions must list one set per player");

  std::vector<Index> tsizes, asizes;
  for (Index i = 0; i < n; ++i) {
    if (g.types[i].empty())
      throw InputError("empty type set for player " + g.players[i]);
    if (g.actions[i].empty())
      throw InputError("empty action set for player " + g.players[i]);
    tsizes.push_back(g.types[i].size());
    asizes.push_back(g.actions[i].size());
  }
  g.type_space = ProfileSpace(tsizes);
  g.action_space = ProfileSpace(asizes);

  if (g.prior.size() != g.type_space.total)
    throw InputError("prior length " + std::to_string(g.prior.size()) +
                     " does not match type profile count " +
                     std::to_string(g.type_space.total));
  check_probability_vector(g.prior, "prior");

  if (g.losses.size() != n)
    throw InputError("losses must provide one table per player");
  const Index table = g.type_space.total * g.action_space.total;
  for (Index i = 0; i < n; ++i) {
    if (g.losses[i].size() != table)
      throw InputError("loss table for player " + g.players[i] + " has " +
                       std::to_string(g.losses[i].size()) + " entries, expected " +
                       std::to_string(table));
    for (Index k = 0; k < table; ++k)
      if (!std::isfinite(g.losses[i][k]))
        throw InputError("non-finite loss for player " + g.players[i] +
                         " at (type profile " +
                         std::to_string(k / g.action_space.total) +
                         ", action profile " +
                         std::to_string(k % g.action_space.total) + ")");
  }
  return g;
}

bool Game::fully_supported() const {
  for (double p : prior)
    if (!(p > 0)) return false;
  return true;
}

double Game::type_mass(Index player, Index own_type) const {
  double mass = 0;
  for (Index t = 0; t < num_type_profiles(); ++t)
    if (type_space.coordinate(t, player) == own_type) mass += prior[t];
  return mass;
}

void Game::require_fully_supported(const std::string& where) const {
  if (!fully_supported())
    throw InputError(where + " requires a fully supported prior");
}

BehavioralStrategy BehavioralStrategy::make(
    const Game& game, Index owner, std::vector<std::vector<double>> rows) {
  if (owner >= game.num_players()) throw InputError("strategy owner out of range");
  BehavioralStrategy s;
  s.owner = owner;
  s.rows = std::move(rows);
  if (s.rows.size() != game.types[owner].size())
    throw InputError("strategy must have one row per own type");
  for (Index t = 0; t < s.rows.size(); ++t) {
    if (s.rows[t].size() != game.actions[owner].size())
      throw InputError("strategy row length does not match action count");
    check_probability_vector(s.rows[t], "strategy row for type " +
                                            game.types[owner][t]);
  }
  return s;
}

BehavioralStrategy BehavioralStrategy::pure(
    const Game& game, Index owner, const std::vector<Index>& action_per_type) {
  std::vector<std::vector<double>> rows;
  for (Index t = 0; t < game.types[owner].size(); ++t) {
    std::vector<double> row(game.actions[owner].size(), 0.0);
    if (action_per_type.at(t) >= row.size())
      throw InputError("pure action index out of range");
    row[action_per_type[t]] = 1.0;
    rows.push_back(std::move(row));
  }
  return make(game, owner, std::move(rows));
}

StrategyProfile StrategyProfile::make(const Game& game,
                                      std::vector<BehavioralStrategy> strategies) {
  if (strategies.size() != game.num_players())
    throw InputError("profile must have one strategy per player");
  for (Index i = 0; i < strategies.size(); ++i)
    if (strategies[i].owner != i)
      throw InputError("profile strategies out of player order");
  StrategyProfile p;
  p.strategies = std::move(strategies);
  return p;
}

StrategyProfile StrategyProfile::pure(
    const Game& game, const std::vector<std::vector<Index>>& actions) {
  std::vector<BehavioralStrategy> list;
  for (Index i = 0; i < game.num_players(); ++i)
    list.push_back(BehavioralStrategy::pure(game, i, actions.at(i)));
  return make(game, std::move(list));
}

InformationPartition InformationPartition::of_player(const Game& game,
                                                     Index player) {
  if (player >= game.num_players()) throw InputError("player out of range");
  InformationPartition part;
  part.owner = player;
  part.cells.resize(game.types[player].size());
  for (Index t = 0; t < game.num_type_profiles(); ++t)
    part.cells[game.type_space.coordinate(t, player)].push_back(t);
  return part;
}

RandomLoss average_loss(const Game& game, const StrategyProfile& profile,
                        Index player) {
  if (player >= game.num_players()) throw InputError("player out of range");
  if (profile.strategies.size() != game.num_players())
    throw InputError("profile does not match game");
  for (Index j = 0; j < game.num_players(); ++j) {
    const auto& s = profile.of(j);
    if (s.rows.size() != game.types[j].size() ||
        (!s.rows.empty() && s.rows[0].size() != game.actions[j].size()))
      throw InputError("strategy dimensions do not match game");
  }

  RandomLoss out;
  out.probs = game.prior;
  out.values.assign(game.num_type_profiles(), 0.0);
  const Index A = game.num_action_profiles();
  for (Index t = 0; t < game.num_type_profiles(); ++t) {
    double acc = 0;
    for (Index a = 0; a < A; ++a) {
      double w = 1.0;
      for (Index j = 0; j < game.num_players() && w != 0.0; ++j) {
        Index tj = game.type_space.coordinate(t, j);
        Index aj = game.action_space.coordinate(a, j);
        w *= profile.of(j).rows[tj][aj];
      }
      if (w != 0.0) acc += w * game.loss(player, t, a);
    }
    out.values[t] = acc;
  }
  return out;
}

std::vector<double> conditional_distribution(const Game& game, Index player,
                                             Index own_type) {
  double mass = game.type_mass(player, own_type);
  if (!(mass > 0))
    throw InputError("unconditionable type: " + game.types.at(player).at(own_type) +
                     " of player " + game.players.at(player) +
                     " has zero prior probability");
  std::vector<double> cond;
  // Canonical opponent order: iterate the full type space and keep the cell;
  // within the cell the opponents' coordinates already run lexicographically.
  for (Index t = 0; t < game.num_type_profiles(); ++t)
    if (game.type_space.coordinate(t, player) == own_type)
      cond.push_back(game.prior[t] / mass);
  return cond;
}

RandomLoss restrict_loss(const RandomLoss& loss,
                         const InformationPartition& partition, Index own_type,
                         bool merge_equal) {
  const auto& cell = partition.cells.at(own_type);
  double mass = 0;
  for (Index t : cell) mass += loss.probs.at(t);
  if (!(mass > 0))
    throw InputError("zero-mass cell: cannot condition on type index " +
                     std::to_string(own_type));
  RandomLoss out;
  for (Index t : cell) {
    double v = loss.values.at(t);
    double p = loss.probs[t] / mass;
    if (merge_equal) {
      bool merged = false;
      for (Index k = 0; k < out.values.size(); ++k)
        if (out.values[k] == v) {
          out.probs[k] += p;
          merged = true;
          break;
        }
      if (merged) continue;
    }
    out.values.push_back(v);
    out.probs.push_back(p);
  }
  return out;
}

}  // namespace riskgame
