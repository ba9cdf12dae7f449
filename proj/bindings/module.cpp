// Python bindings for the risk-game solver core.  Exposes the evaluation,
// dual-extraction, revision, equilibrium-certification, verification, and
// file-format operations, mirroring the C++ API one-to-one.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "riskgame/conditional.hpp"
#include "riskgame/equilibrium.hpp"
#include "riskgame/io.hpp"
#include "riskgame/reference_game.hpp"
#include "riskgame/risk.hpp"

namespace py = pybind11;
using namespace riskgame;

PYBIND11_MODULE(_riskgame, m) {
  m.doc() =
      "Solver for finite incomplete-information games whose players rank "
      "random losses with coherent risk measures and may revise them at the "
      "interim stage.";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  m.attr("VALUE_TOL") = kValueTol;
  m.attr("PROB_TOL") = kProbTol;
  m.attr("NO_TYPE") = kNoType;

  // -- core containers ------------------------------------------------------

  py::class_<RandomLoss>(m, "RandomLoss",
                         "A finite random loss: atom values and probabilities.")
      .def(py::init([](std::vector<double> values, std::vector<double> probs) {
             return RandomLoss{std::move(values), std::move(probs)};
           }),
           py::arg("values"), py::arg("probs"))
      .def_readwrite("values", &RandomLoss::values)
      .def_readwrite("probs", &RandomLoss::probs)
      .def("mean", &RandomLoss::mean)
      .def("__len__", &RandomLoss::size);

  py::class_<Game>(m, "Game")
      .def_static("make", &Game::make, py::arg("players"), py::arg("types"),
                  py::arg("actions"), py::arg("prior"), py::arg("losses"))
      .def_readonly("players", &Game::players)
      .def_readonly("types", &Game::types)
      .def_readonly("actions", &Game::actions)
      .def_readonly("prior", &Game::prior)
      .def_readonly("losses", &Game::losses)
      .def_property_readonly("num_players", &Game::num_players)
      .def_property_readonly("num_type_profiles", &Game::num_type_profiles)
      .def("loss", &Game::loss, py::arg("player"), py::arg("type_profile"),
           py::arg("action_profile"))
      .def("__repr__", [](const Game& g) {
        std::string s = "Game(";
        for (Index i = 0; i < g.num_players(); ++i)
          s += (i ? ", " : "") + g.players[i] + ": " +
               std::to_string(g.types[i].size()) + " types x " +
               std::to_string(g.actions[i].size()) + " actions";
        return s + ")";
      });

  py::enum_<RiskKind>(m, "RiskKind")
      .value("EXPECTATION", RiskKind::Expectation)
      .value("AVAR", RiskKind::AVaR)
      .value("ESSSUP", RiskKind::EssentialSup)
      .value("SPECTRAL_MIXTURE", RiskKind::SpectralMixture)
      .value("POLYTOPE_DUAL", RiskKind::PolytopeDual);

  py::class_<RiskMeasureSpec>(m, "RiskMeasureSpec")
      .def_static("expectation", &RiskMeasureSpec::expectation)
      .def_static("esssup", &RiskMeasureSpec::esssup)
      .def_static("avar", &RiskMeasureSpec::avar, py::arg("alpha"))
      .def_static("avar_rational", &RiskMeasureSpec::avar_rational,
                  py::arg("num"), py::arg("den"))
      .def_static("spectral", &RiskMeasureSpec::spectral,
                  py::arg("components"))
      .def_static("polytope", &RiskMeasureSpec::polytope, py::arg("vertices"))
      .def_readonly("kind", &RiskMeasureSpec::kind)
      .def_readonly("alpha", &RiskMeasureSpec::alpha)
      .def_readonly("alpha_num", &RiskMeasureSpec::alpha_num)
      .def_readonly("alpha_den", &RiskMeasureSpec::alpha_den)
      .def_readonly("components", &RiskMeasureSpec::components)
      .def_readonly("vertices", &RiskMeasureSpec::vertices)
      .def("rational_level", &RiskMeasureSpec::rational_level)
      .def("tail", &RiskMeasureSpec::tail)
      .def("cap", &RiskMeasureSpec::cap)
      .def("describe", &RiskMeasureSpec::describe)
      .def("__repr__", &RiskMeasureSpec::describe);

  py::class_<DualDensity>(m, "DualDensity")
      .def(py::init([](std::vector<double> values) {
             return DualDensity{std::move(values)};
           }),
           py::arg("values"))
      .def_readwrite("values", &DualDensity::values);

  py::class_<BehavioralStrategy>(m, "BehavioralStrategy")
      .def_static("make", &BehavioralStrategy::make, py::arg("game"),
                  py::arg("owner"), py::arg("rows"))
      .def_static("pure", &BehavioralStrategy::pure, py::arg("game"),
                  py::arg("owner"), py::arg("action_per_type"))
      .def_readonly("owner", &BehavioralStrategy::owner)
      .def_readonly("rows", &BehavioralStrategy::rows);

  py::class_<StrategyProfile>(m, "StrategyProfile")
      .def_static("make", &StrategyProfile::make, py::arg("game"),
                  py::arg("strategies"))
      .def_static("pure", &StrategyProfile::pure, py::arg("game"),
                  py::arg("actions"))
      .def_readonly("strategies", &StrategyProfile::strategies);

  py::class_<InformationPartition>(m, "InformationPartition")
      .def_static("of_player", &InformationPartition::of_player,
                  py::arg("game"), py::arg("player"))
      .def_readonly("owner", &InformationPartition::owner)
      .def_readonly("cells", &InformationPartition::cells);

  py::class_<ConditionalDual>(m, "ConditionalDual")
      .def(py::init([](Index owner, std::vector<double> weights) {
             return ConditionalDual{owner, std::move(weights)};
           }),
           py::arg("owner"), py::arg("weights"))
      .def_readonly("owner", &ConditionalDual::owner)
      .def_readonly("weights", &ConditionalDual::weights);

  py::class_<RevisedInterimMeasure>(m, "RevisedInterimMeasure")
      .def_readonly("owner", &RevisedInterimMeasure::owner)
      .def_readonly("own_type", &RevisedInterimMeasure::own_type)
      .def_readonly("source", &RevisedInterimMeasure::source)
      .def_readonly("weight", &RevisedInterimMeasure::weight)
      .def_readonly("has_revised_level",
                    &RevisedInterimMeasure::has_revised_level)
      .def_readonly("revised_alpha", &RevisedInterimMeasure::revised_alpha);

  // -- reports --------------------------------------------------------------

  py::class_<CoherenceReport>(m, "CoherenceReport")
      .def_readonly("trials", &CoherenceReport::trials)
      .def_readonly("monotonicity", &CoherenceReport::monotonicity)
      .def_readonly("convexity", &CoherenceReport::convexity)
      .def_readonly("translation_invariance",
                    &CoherenceReport::translation_invariance)
      .def_readonly("positive_homogeneity",
                    &CoherenceReport::positive_homogeneity)
      .def_readonly("law_invariance", &CoherenceReport::law_invariance)
      .def_readonly("counterexample", &CoherenceReport::counterexample)
      .def("passed", &CoherenceReport::passed);

  py::class_<DecompositionReport>(m, "DecompositionReport")
      .def_readonly("ex_ante", &DecompositionReport::ex_ante)
      .def_readonly("attained", &DecompositionReport::attained)
      .def_readonly("max_sampled", &DecompositionReport::max_sampled)
      .def_readonly("gap", &DecompositionReport::gap)
      .def_readonly("ok", &DecompositionReport::pass);

  py::class_<DeviationRecord>(m, "DeviationRecord")
      .def_readonly("player", &DeviationRecord::player)
      .def_readonly("own_type", &DeviationRecord::own_type)
      .def_readonly("incumbent", &DeviationRecord::incumbent)
      .def_readonly("best_deviation", &DeviationRecord::best_deviation)
      .def_readonly("gain", &DeviationRecord::gain)
      .def_readonly("deviation_label", &DeviationRecord::deviation_label);

  py::class_<EquilibriumCertificate>(m, "EquilibriumCertificate")
      .def_readonly("kind", &EquilibriumCertificate::kind)
      .def_readonly("profile", &EquilibriumCertificate::profile)
      .def_readonly("records", &EquilibriumCertificate::records)
      .def_readonly("tol", &EquilibriumCertificate::tol)
      .def_readonly("equilibrium", &EquilibriumCertificate::equilibrium);

  py::class_<PureProfileRecord>(m, "PureProfileRecord")
      .def_readonly("actions", &PureProfileRecord::actions)
      .def_readonly("label", &PureProfileRecord::label)
      .def_readonly("risks", &PureProfileRecord::risks)
      .def_readonly("certificate", &PureProfileRecord::certificate)
      .def_readonly("pure_equilibrium", &PureProfileRecord::pure_equilibrium);

  py::class_<IterationConfig>(m, "IterationConfig")
      .def(py::init<>())
      .def_readwrite("max_iters", &IterationConfig::max_iters)
      .def_readwrite("damping", &IterationConfig::damping)
      .def_readwrite("tol", &IterationConfig::tol)
      .def_readwrite("seed", &IterationConfig::seed);

  py::class_<RevisionProfile>(m, "RevisionProfile")
      .def_readonly("inducing", &RevisionProfile::inducing)
      .def_readonly("sources", &RevisionProfile::sources)
      .def_readonly("duals", &RevisionProfile::duals)
      .def_readonly("conditionals", &RevisionProfile::conditionals)
      .def_readonly("interim", &RevisionProfile::interim);

  py::class_<ImplicationReport>(m, "ImplicationReport")
      .def_readonly("kind", &ImplicationReport::kind)
      .def_readonly("premises_hold", &ImplicationReport::premises_hold)
      .def_readonly("premise_notes", &ImplicationReport::premise_notes)
      .def_readonly("antecedent", &ImplicationReport::antecedent)
      .def_readonly("consequent", &ImplicationReport::consequent)
      .def_readonly("applicable", &ImplicationReport::applicable)
      .def_readonly("implication_ok", &ImplicationReport::implication_ok)
      .def_readonly("label", &ImplicationReport::label);

  py::enum_<RprcMode>(m, "RprcMode")
      .value("STRICT", RprcMode::Strict)
      .value("WEAK_DOMINANCE", RprcMode::WeakDominance);

  py::class_<RprcPairRecord>(m, "RprcPairRecord")
      .def_readonly("first", &RprcPairRecord::first)
      .def_readonly("second", &RprcPairRecord::second)
      .def_readonly("applicable", &RprcPairRecord::applicable)
      .def_readonly("holds", &RprcPairRecord::holds)
      .def_readonly("detail", &RprcPairRecord::detail);

  py::class_<RprcReport>(m, "RprcReport")
      .def_readonly("player", &RprcReport::player)
      .def_readonly("mode", &RprcReport::mode)
      .def_readonly("checked", &RprcReport::checked)
      .def_readonly("applicable", &RprcReport::applicable)
      .def_readonly("violations", &RprcReport::violations)
      .def_readonly("records", &RprcReport::records);

  py::class_<DominanceReport>(m, "DominanceReport")
      .def_readonly("player", &DominanceReport::player)
      .def_readonly("favoured_under_rival",
                    &DominanceReport::favoured_under_rival)
      .def_readonly("rival_under_rival", &DominanceReport::rival_under_rival)
      .def_readonly("favoured_under_own", &DominanceReport::favoured_under_own)
      .def_readonly("rival_under_own", &DominanceReport::rival_under_own)
      .def_readonly("ex_ante_favoured", &DominanceReport::ex_ante_favoured)
      .def_readonly("ex_ante_rival", &DominanceReport::ex_ante_rival)
      .def_readonly("premise", &DominanceReport::premise)
      .def_readonly("conclusion", &DominanceReport::conclusion)
      .def_readonly("ok", &DominanceReport::pass);

  py::class_<BeliefSystem>(m, "BeliefSystem")
      .def(py::init([](std::vector<Index> type_counts,
                       std::vector<std::vector<std::vector<double>>> beliefs) {
             return BeliefSystem{std::move(type_counts), std::move(beliefs)};
           }),
           py::arg("type_counts"), py::arg("beliefs"))
      .def_readonly("type_counts", &BeliefSystem::type_counts)
      .def_readonly("beliefs", &BeliefSystem::beliefs);

  py::class_<ConsistencyReport>(m, "ConsistencyReport")
      .def_readonly("consistent", &ConsistencyReport::consistent)
      .def_readonly("prior", &ConsistencyReport::prior)
      .def_readonly("min_live_margin", &ConsistencyReport::min_live_margin);

  py::class_<CommonizedType>(m, "CommonizedType")
      .def_readonly("player", &CommonizedType::player)
      .def_readonly("own_type", &CommonizedType::own_type)
      .def_readonly("belief", &CommonizedType::belief)
      .def_readonly("interim_loss", &CommonizedType::interim_loss)
      .def_readonly("singleton", &CommonizedType::singleton)
      .def_readonly("improving_direction", &CommonizedType::improving_direction)
      .def_readonly("attained", &CommonizedType::attained)
      .def_readonly("attainment_ok", &CommonizedType::attainment_ok)
      .def_readonly("support_ok", &CommonizedType::support_ok);

  py::class_<CommonizationReport>(m, "CommonizationReport")
      .def_readonly("prior", &CommonizationReport::prior)
      .def_readonly("types", &CommonizationReport::types)
      .def_readonly("ok", &CommonizationReport::pass);

  py::class_<ReconstructionReport>(m, "ReconstructionReport")
      .def_readonly("game", &ReconstructionReport::game)
      .def_readonly("feasible", &ReconstructionReport::feasible)
      .def_readonly("provenance", &ReconstructionReport::provenance)
      .def_readonly("checks", &ReconstructionReport::checks)
      .def_readonly("notes", &ReconstructionReport::notes);

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("command", &RunConfig::command)
      .def_readwrite("game_path", &RunConfig::game_path)
      .def_readwrite("specs_path", &RunConfig::specs_path)
      .def_readwrite("profile", &RunConfig::profile)
      .def_readwrite("revision_from", &RunConfig::revision_from)
      .def_readwrite("dual_override_path", &RunConfig::dual_override_path)
      .def_readwrite("tol", &RunConfig::tol)
      .def_readwrite("seed", &RunConfig::seed)
      .def_readwrite("format", &RunConfig::format);

  py::class_<RunResult>(m, "RunResult")
      .def_readonly("exit_code", &RunResult::exit_code)
      .def_readonly("output", &RunResult::output);

  // -- evaluation and duality ----------------------------------------------

  m.def("evaluate", &evaluate, py::arg("spec"), py::arg("loss"),
        "The risk of a loss under a coherent risk measure.");
  m.def("optimal_dual", &optimal_dual, py::arg("spec"), py::arg("loss"),
        "A dual density attaining the risk as a worst-case expectation.");
  m.def("is_dual_feasible", &is_dual_feasible, py::arg("spec"),
        py::arg("probs"), py::arg("dual"), py::arg("tol") = kValueTol);
  m.def("is_dual_optimal", &is_dual_optimal, py::arg("spec"), py::arg("loss"),
        py::arg("dual"), py::arg("tol") = kValueTol);
  m.def("check_coherence",
        py::overload_cast<const RiskMeasureSpec&, int, std::uint64_t>(
            &check_coherence),
        py::arg("spec"), py::arg("trials"), py::arg("seed"),
        "Randomized audit of the coherence axioms plus law invariance.");

  // -- games and interim structure -----------------------------------------

  m.def("average_loss", &average_loss, py::arg("game"), py::arg("profile"),
        py::arg("player"),
        "The player's loss over type profiles averaged over the profile's "
        "action randomization.");
  m.def("restrict_loss", &restrict_loss, py::arg("loss"), py::arg("partition"),
        py::arg("own_type"), py::arg("merge_equal") = false,
        "The loss conditioned on one information cell.");
  m.def("project_dual", &project_dual, py::arg("dual"), py::arg("partition"),
        py::arg("prior"),
        "Cell-wise conditional expectations of a dual density.");
  m.def("revised_level",
        py::overload_cast<const RiskMeasureSpec&, double>(&revised_level),
        py::arg("avar_spec"), py::arg("z"),
        "The interim tail level 1 - (1 - alpha) z.");
  m.def("revise_interim", &revise_interim, py::arg("source"), py::arg("cond"),
        py::arg("own_type"));
  m.def("conditional_evaluate", &conditional_evaluate, py::arg("source"),
        py::arg("cond"), py::arg("loss"), py::arg("partition"),
        py::arg("own_type"),
        "The revised interim risk of one cell under a conditional weight.");
  m.def("verify_decomposition", &verify_decomposition, py::arg("spec"),
        py::arg("loss"), py::arg("partition"), py::arg("samples") = 200,
        py::arg("seed") = 7,
        "Checks that projected optimal duals reconstruct the ex ante risk "
        "and sampled feasible projections never exceed it.");

  // -- equilibrium ----------------------------------------------------------

  m.def("profile_label", &profile_label, py::arg("game"), py::arg("actions"));
  m.def("parse_profile_label", &parse_profile_label, py::arg("game"),
        py::arg("text"));
  m.def("best_response_ex_ante", &best_response_ex_ante, py::arg("game"),
        py::arg("specs"), py::arg("player"), py::arg("others"));
  m.def("check_rane", &check_rane, py::arg("game"), py::arg("specs"),
        py::arg("profile"), py::arg("tol") = kValueTol,
        "Certifies ex ante stability against behavioural deviations.");
  m.def("solve_rane_pure", &solve_rane_pure, py::arg("game"), py::arg("specs"),
        py::arg("tol") = kValueTol, py::arg("cap") = 1000000,
        "Enumerates every pure profile and certifies each.");
  m.def("solve_rane_mixed", &solve_rane_mixed, py::arg("game"),
        py::arg("specs"), py::arg("config") = IterationConfig{},
        "Iterative best-response search for a mixed candidate.");
  m.def("check_rabne", &check_rabne, py::arg("game"), py::arg("specs"),
        py::arg("profile"), py::arg("tol") = kValueTol,
        py::arg("mixed_deviations") = false,
        "Certifies interim stability without revision.");
  m.def("build_revision", &build_revision, py::arg("game"), py::arg("specs"),
        py::arg("inducing"),
        py::arg("overrides") = std::vector<std::optional<DualDensity>>{},
        "The interim revision induced by a profile's optimal (or overridden) "
        "dual densities.");
  m.def("unrevised_revision", &unrevised_revision, py::arg("game"),
        py::arg("specs"), py::arg("inducing"));
  m.def("check_rrbne", &check_rrbne, py::arg("game"), py::arg("revision"),
        py::arg("profile"), py::arg("tol") = kValueTol,
        py::arg("mixed_deviations") = false,
        "Certifies interim stability under a revision.");
  m.def("check_rprc_sampled", &check_rprc_sampled, py::arg("game"),
        py::arg("specs"), py::arg("player"), py::arg("num_pairs"),
        py::arg("seed"), py::arg("mode") = RprcMode::Strict,
        py::arg("tol") = kValueTol,
        "Samples profile pairs and checks cross-revision ranking "
        "preservation.");
  m.def("verify_rrbne_implies_rane", &verify_rrbne_implies_rane,
        py::arg("game"), py::arg("specs"), py::arg("profile"),
        py::arg("tol") = kValueTol,
        "Interim stability under the own revision (hedged deviations "
        "included) implies ex ante stability.");
  m.def("verify_rane_implies_rrbne", &verify_rane_implies_rrbne,
        py::arg("game"), py::arg("specs"), py::arg("profile"),
        py::arg("tol") = kValueTol, py::arg("sampled_profiles") = 20,
        py::arg("sampled_pairs") = 20, py::arg("seed") = 1,
        "Ex ante stability implies interim stability under the own revision, "
        "once the sampled premises hold.");
  m.def("check_weighted_average_dominance", &check_weighted_average_dominance,
        py::arg("game"), py::arg("specs"), py::arg("player"),
        py::arg("favoured"), py::arg("rival"), py::arg("tol") = kValueTol);

  // -- beliefs --------------------------------------------------------------

  m.def("risk_neutral_equivalent", &risk_neutral_equivalent, py::arg("game"),
        py::arg("specs"), py::arg("profile"),
        "Per player, the reweighted distribution under which risk-averse "
        "play looks risk neutral.");
  m.def("beliefs_from_prior", &beliefs_from_prior, py::arg("game"));
  m.def("check_belief_consistency", &check_belief_consistency,
        py::arg("beliefs"),
        py::arg("live") = std::vector<std::vector<Index>>{},
        "Searches for a common prior reproducing an interim belief system.");
  m.def("commonize", &commonize, py::arg("game"), py::arg("beliefs"),
        py::arg("profile"), py::arg("prior") = std::vector<double>{},
        "Represents interim beliefs as worst-case sets under a common "
        "reference prior.");

  // -- bundled game and files ----------------------------------------------

  m.def("reference_game", &reference_game,
        "The bundled two-player game with types {G,H} and tail-average "
        "preferences at level 1/3.");
  m.def("reconstruct_reference_game", &reconstruct_reference_game,
        "Rebuilds the bundled game's loss tables from quoted anchors and "
        "cross-checks every anchor.");
  m.def("parse_game", &parse_game, py::arg("text"),
        py::arg("origin") = "<input>");
  m.def("load_game", &load_game, py::arg("path"));
  m.def("serialize_game", &serialize_game, py::arg("game"));
  m.def("save_game", &save_game, py::arg("game"), py::arg("path"));
  m.def("parse_specs", &parse_specs, py::arg("text"), py::arg("players"),
        py::arg("origin") = "<input>");
  m.def("load_specs", &load_specs, py::arg("path"), py::arg("players"));
  m.def("serialize_specs", &serialize_specs, py::arg("specs"));
  m.def("parse_dual_overrides", &parse_dual_overrides, py::arg("text"),
        py::arg("game"), py::arg("origin") = "<input>");
  m.def("load_dual_overrides", &load_dual_overrides, py::arg("path"),
        py::arg("game"));
  m.def("format_one_decimal", &format_one_decimal, py::arg("value"),
        "One-decimal display that rounds ties down, matching the report "
        "tables.");
  m.def("default_data_dir", &default_data_dir);
  m.def("run", &run, py::arg("config"),
        "Programmatic entry to the command-line surface; returns the exit "
        "code and the rendered report.");
}
