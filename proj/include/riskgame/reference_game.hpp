#pragma once

#include <string>
#include <vector>

#include "riskgame/game.hpp"

namespace riskgame {

// The bundled two-player reference game: types {G,H} per player, actions
// {S,D} / {s,d}, uniform prior 1/4, both players evaluating losses with
// AV@R at level 1/3.  Shipped as data/two_player_gh.json.
Game reference_game();

// Result of rebuilding the reference game's loss tables from their anchors:
// directly quoted entries, the player-symmetry closure, and the interim risk
// values that pin the one remaining leaf.
struct ReconstructionReport {
  Game game;
  bool feasible = false;
  // Per player, one tag per (type profile, action profile) table entry:
  // "direct", "symmetry", or "fitted".
  std::vector<std::vector<std::string>> provenance;
  std::vector<std::string> checks;
  std::vector<std::string> notes;
};

// Rebuilds the table from the anchor set and cross-checks every anchor.
// The oracle exists so the bundled file never rests on invented numbers:
// each loss entry is either quoted, forced by symmetry, or the unique
// solution of a quoted interim risk equation.
ReconstructionReport reconstruct_reference_game();

}  // namespace riskgame
