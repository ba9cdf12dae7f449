#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "riskgame/errors.hpp"

namespace riskgame {

using Index = std::size_t;

// Tolerance for probability normalization on input.
inline constexpr double kProbTol = 1e-12;
// Default tolerance for comparing computed real values.
inline constexpr double kValueTol = 1e-9;

// Mixed-radix indexing of joint profiles (type profiles or action profiles).
// Player 0 is the outermost digit, so flat indices enumerate profiles
// lexicographically by per-player index.
struct ProfileSpace {
  std::vector<Index> sizes;
  Index total = 1;

  ProfileSpace() = default;
  explicit ProfileSpace(std::vector<Index> per_player);

  Index flatten(const std::vector<Index>& coords) const;
  std::vector<Index> unflatten(Index flat) const;
  // The i-th coordinate of a flat profile index.
  Index coordinate(Index flat, Index player) const;
  // The flat index with player's coordinate replaced by value.
  Index replace(Index flat, Index player, Index value) const;
};

// A finite distribution of losses: one real value per atom together with the
// probability of that atom.  Ex ante losses carry the game prior; conditional
// losses carry cell-conditional probabilities.  Probabilities sum to one.
struct RandomLoss {
  std::vector<double> values;
  std::vector<double> probs;

  Index size() const { return values.size(); }
  double mean() const;
};

// A finite incomplete-information game: per-player type and action sets, a
// common prior over joint type profiles, and per-player loss tables indexed
// by (type profile, action profile).
struct Game {
  std::vector<std::string> players;
  std::vector<std::vector<std::string>> types;    // per player
  std::vector<std::vector<std::string>> actions;  // per player
  std::vector<double> prior;                      // over type profiles
  // losses[i][t * num_action_profiles + a]
  std::vector<std::vector<double>> losses;

  ProfileSpace type_space;
  ProfileSpace action_space;

  // Validates and finalizes the structure; throws InputError on dimension or
  // normalization problems.
  static Game make(std::vector<std::string> players,
                   std::vector<std::vector<std::string>> types,
                   std::vector<std::vector<std::string>> actions,
                   std::vector<double> prior,
                   std::vector<std::vector<double>> losses);

  Index num_players() const { return players.size(); }
  Index num_type_profiles() const { return type_space.total; }
  Index num_action_profiles() const { return action_space.total; }

  double loss(Index player, Index type_profile, Index action_profile) const {
    return losses[player][type_profile * action_space.total + action_profile];
  }

  // True iff every prior entry is strictly positive.
  bool fully_supported() const;
  // Prior mass of player's type cell {t : t_i = own_type}.
  double type_mass(Index player, Index own_type) const;

  void require_fully_supported(const std::string& where) const;
};

// One player's behavioral strategy: a probability row over actions for each
// own type.
struct BehavioralStrategy {
  Index owner = 0;
  std::vector<std::vector<double>> rows;  // rows[own_type][action]

  static BehavioralStrategy make(const Game& game, Index owner,
                                 std::vector<std::vector<double>> rows);
  // The pure strategy playing action_per_type[t_i] at each own type.
  static BehavioralStrategy pure(const Game& game, Index owner,
                                 const std::vector<Index>& action_per_type);
};

struct StrategyProfile {
  std::vector<BehavioralStrategy> strategies;  // in player order

  static StrategyProfile make(const Game& game,
                              std::vector<BehavioralStrategy> strategies);
  static StrategyProfile pure(const Game& game,
                              const std::vector<std::vector<Index>>& actions);
  const BehavioralStrategy& of(Index player) const { return strategies[player]; }
};

// The interim information of one player: for each own type, the flat type
// profiles in which the player has that type.  Cells partition the type space.
struct InformationPartition {
  Index owner = 0;
  std::vector<std::vector<Index>> cells;  // cells[own_type] -> flat indices

  static InformationPartition of_player(const Game& game, Index player);
};

// Multilinear average of player's loss table under the profile:
// values[t] = sum_a l^i(t,a) * prod_j beta_j(a_j | t_j);  probabilities are
// the game prior.
RandomLoss average_loss(const Game& game, const StrategyProfile& profile,
                        Index player);

// P(t_{-i} | t_i) over opponent type profiles in canonical order (player
// order preserved with player i removed).  Throws on a zero-mass own type.
std::vector<double> conditional_distribution(const Game& game, Index player,
                                             Index own_type);

// The conditional distribution of loss on one partition cell: cell values
// paired with renormalized probabilities.  With merge_equal, equal values are
// combined into one atom.  Throws on a zero-mass cell.
RandomLoss restrict_loss(const RandomLoss& loss,
                         const InformationPartition& partition, Index own_type,
                         bool merge_equal = false);

}  // namespace riskgame
