// Command-line front end for the risk-game solver: evaluates ex ante risks,
// extracts optimal dual densities, builds interim revisions, enumerates and
// certifies equilibria, runs the consistency verifiers, and derives beliefs.
//
// Exit codes: 0 success / verdict passed, 1 verdict failed, 2 usage or input
// error, 3 numerical failure.

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "riskgame/io.hpp"

namespace {

bool logging_enabled() {
  const char* v = std::getenv("RISKGAME_LOG");
  return v && *v && std::string(v) != "0";
}

void note(const std::string& msg) {
  if (logging_enabled()) std::cerr << "riskgame: " << msg << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Solver for finite incomplete-information games whose players rank "
      "random losses with coherent risk measures and may revise them at the "
      "interim stage."};
  app.require_subcommand(1);

  riskgame::RunConfig cfg;

  auto add_common = [&](CLI::App* sub, bool needs_profile) {
    sub->add_option("--game", cfg.game_path, "game description (JSON)")
        ->required();
    sub->add_option("--specs", cfg.specs_path,
                    "risk measures per player (JSON); defaults to the tail "
                    "average at level 1/3 for every player");
    auto* prof = sub->add_option("--profile", cfg.profile,
                                 "pure profile label, e.g. \"(DS,ds)\"");
    if (needs_profile) prof->required();
    sub->add_option("--tol", cfg.tol, "comparison tolerance")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "seed for sampled checks");
    sub->add_option("--format", cfg.format, "output format: json or md")
        ->check(CLI::IsMember({"json", "md"}));
    return sub;
  };
  auto add_revision = [&](CLI::App* sub) {
    sub->add_option("--revision-from", cfg.revision_from,
                    "profile inducing the revision (defaults to --profile)");
    sub->add_option("--dual-override", cfg.dual_override_path,
                    "optimal dual densities to revise with, per player "
                    "(JSON); omitted players use the canonical dual");
  };

  add_common(app.add_subcommand(
                 "eval", "ex ante risk of a pure profile, per player"),
             true);
  add_revision(add_common(
      app.add_subcommand(
          "dual", "optimal dual density behind each player's ex ante risk"),
      true));
  add_revision(add_common(
      app.add_subcommand("revise",
                         "interim revisions induced by a pure profile: cell "
                         "weights and revised measures"),
      false));
  add_common(app.add_subcommand("solve-rane",
                                "enumerate pure profiles and certify ex ante "
                                "stability (risk-averse Nash equilibria)"),
             false);
  add_common(app.add_subcommand("check-rabne",
                                "certify interim stability without revision "
                                "(risk-averse Bayesian Nash equilibrium)"),
             true);
  add_revision(add_common(
      app.add_subcommand("check-rrbne",
                         "certify interim stability under a revision "
                         "(risk-revising Bayesian Nash equilibrium)"),
      true));
  add_common(app.add_subcommand(
                 "verify",
                 "run the consistency battery: interim decomposition of the "
                 "ex ante risk, both stability implications, and dominance "
                 "transfer between weighted interim averages"),
             false);
  add_common(app.add_subcommand("beliefs",
                                "interim beliefs from the prior, their "
                                "common-prior consistency, and (with "
                                "--profile) belief-set commonization"),
             false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  note("command " + cfg.command + " on " + cfg.game_path);

  try {
    riskgame::RunResult res = riskgame::run(cfg);
    std::cout << res.output;
    note("finished with exit code " + std::to_string(res.exit_code));
    return res.exit_code;
  } catch (const riskgame::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const riskgame::NumericError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  }
}
