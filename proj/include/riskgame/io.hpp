#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "riskgame/equilibrium.hpp"

namespace riskgame {

// ---------------------------------------------------------------------------
// Game files
// ---------------------------------------------------------------------------
//
// Schema (stable key order as written by serialize_game):
//   {
//     "players": ["1", "2"],
//     "types":   {"1": ["G", "H"], "2": ["G", "H"]},
//     "actions": {"1": ["S", "D"], "2": ["s", "d"]},
//     "prior":   [0.25, 0.25, 0.25, 0.25],
//     "losses":  {"1": [...], "2": [...]}
//   }
// Prior entries enumerate type profiles lexicographically by per-player
// index (first player outermost); each loss table is flat over
// (type profile, action profile), row-major with the type profile outer.
// A top-level "meta" key is ignored by the loader, so bundled files can
// carry annotations.  Schema problems are reported with the line of the
// offending construct in the source text.

Game parse_game(const std::string& text, const std::string& origin = "<input>");
Game load_game(const std::string& path);

// Full-precision serialization; parse_game(serialize_game(g)) reproduces
// every field of g exactly.
std::string serialize_game(const Game& game);
void save_game(const Game& game, const std::string& path);

// ---------------------------------------------------------------------------
// Risk measure spec files
// ---------------------------------------------------------------------------
//
// One spec is an object:
//   {"kind": "expectation"}
//   {"kind": "avar", "alpha": 0.25}            (plain level)
//   {"kind": "avar", "alpha": {"num":1,"den":3}}  (exact rational level)
//   {"kind": "esssup"}
//   {"kind": "spectral", "components": [[w, alpha], ...]}
//   {"kind": "polytope", "vertices": [[...], ...]}
// A spec file holds either a single object (replicated for every player),
// an array with one spec per player, or an object keyed by player name.

std::vector<RiskMeasureSpec> parse_specs(const std::string& text,
                                         const std::vector<std::string>& players,
                                         const std::string& origin = "<input>");
std::vector<RiskMeasureSpec> load_specs(const std::string& path,
                                        const std::vector<std::string>& players);
std::string serialize_specs(const std::vector<RiskMeasureSpec>& specs);

// ---------------------------------------------------------------------------
// Dual override files
// ---------------------------------------------------------------------------
//
// Either an object keyed by player name or an array in player order; each
// entry is an array over type profiles or null to keep the canonical dual.
// Feasibility and optimality are enforced later by build_revision.

std::vector<std::optional<DualDensity>> parse_dual_overrides(
    const std::string& text, const Game& game,
    const std::string& origin = "<input>");
std::vector<std::optional<DualDensity>> load_dual_overrides(
    const std::string& path, const Game& game);

// ---------------------------------------------------------------------------
// Display helpers
// ---------------------------------------------------------------------------

// One-decimal display with half-down ties: 32.75 -> "32.7", 48.625 ->
// "48.6", 42.4 -> "42.4"; integral results drop the decimal ("11", "59").
// Display only -- nothing downstream consumes these strings.
std::string format_one_decimal(double v);

// The data directory bundled with the build, overridable at run time with
// the RISKGAME_DATA_DIR environment variable.
std::string default_data_dir();

// ---------------------------------------------------------------------------
// Command dispatch
// ---------------------------------------------------------------------------

struct RunConfig {
  // eval | dual | revise | solve-rane | check-rabne | check-rrbne |
  // verify | beliefs
  std::string command;
  std::string game_path;
  std::string specs_path;          // empty: AV@R(1/3) for every player
  std::string profile;             // pure profile label, e.g. "(DS,ds)"
  std::string revision_from;       // empty: revision induced by `profile`
  std::string dual_override_path;  // empty: canonical duals
  double tol = kValueTol;
  std::uint64_t seed = 1;
  std::string format = "json";  // json | md
};

struct RunResult {
  int exit_code = 0;  // 0 pass, 1 fail verdict
  std::string output;
};

// Executes one subcommand and renders its report in the requested format.
// Input and usage problems throw InputError, solver failures NumericError;
// the CLI maps those to exit codes 2 and 3.
RunResult run(const RunConfig& config);

}  // namespace riskgame
