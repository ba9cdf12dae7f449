#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "riskgame/conditional.hpp"
#include "riskgame/game.hpp"
#include "riskgame/lp.hpp"
#include "riskgame/risk.hpp"

namespace riskgame {

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

// An interim revision of every player's risk evaluation, induced by one
// strategy profile: the optimal ex ante dual density of each player's loss,
// projected onto that player's information cells.  Carries everything needed
// to evaluate revised interim risks of arbitrary candidate losses.
struct RevisionProfile {
  StrategyProfile inducing;                // the profile the duals come from
  std::vector<RiskMeasureSpec> sources;    // per player, the ex ante measure
  std::vector<DualDensity> duals;          // per player, over type profiles
  std::vector<ConditionalDual> conditionals;  // per player, over own types
  std::vector<std::vector<RevisedInterimMeasure>> interim;  // [player][type]
};

// One row of an equilibrium check: who could deviate, from what value, to
// what value.  `own_type == kNoType` marks an ex ante (whole strategy) row;
// otherwise the row is interim for that type.  `gain` is incumbent minus the
// best rival value, so positive gain means a profitable deviation.
inline constexpr Index kNoType = static_cast<Index>(-1);

struct DeviationRecord {
  Index player = 0;
  Index own_type = kNoType;
  double incumbent = 0;
  double best_deviation = 0;
  double gain = 0;
  std::string deviation_label;  // strategy or action achieving best_deviation
};

struct EquilibriumCertificate {
  std::string kind;  // "ex-ante" | "interim-unrevised" | "interim-revised"
  StrategyProfile profile;
  std::vector<DeviationRecord> records;
  double tol = kValueTol;
  bool equilibrium = false;  // every gain <= tol
};

// Interim beliefs: beliefs[i][t] is player i's distribution over opponent
// type profiles (canonical flat order with player i's coordinate removed)
// when their own type is t.
struct BeliefSystem {
  std::vector<Index> type_counts;                         // per player
  std::vector<std::vector<std::vector<double>>> beliefs;  // [player][type][..]
};

// ---------------------------------------------------------------------------
// Profile labels
// ---------------------------------------------------------------------------

// "(DS,ds)": one block per player, one action label per own type, players
// joined by commas.  Defined only for pure profiles.
std::string profile_label(const Game& game,
                          const std::vector<std::vector<Index>>& actions);

// Inverse of profile_label.  Accepts the parenthesised form or the bare
// comma-joined blocks; throws InputError on unknown labels or wrong shape.
std::vector<std::vector<Index>> parse_profile_label(const Game& game,
                                                    const std::string& text);

// ---------------------------------------------------------------------------
// Best responses and ex ante equilibrium
// ---------------------------------------------------------------------------

// Minimises player `player`'s ex ante risk over their own behavioural
// strategies, with every other player fixed at `others`.  Solved as a linear
// program (epigraph form for tail averages, worst-vertex form for polytope
// sets).  Rows are canonicalised type by type towards the lowest-indexed
// pure action that stays optimal; rows where only mixing attains the
// optimum (worst-case measures reward hedging) remain mixed.
BehavioralStrategy best_response_ex_ante(const Game& game,
                                         const std::vector<RiskMeasureSpec>& specs,
                                         Index player,
                                         const StrategyProfile& others);

// The best-response value alone, solved with a caller-chosen simplex pivot
// rule.  Exists so audits can re-derive certified values along a different
// pivot path and compare.
double best_response_value(const Game& game,
                           const std::vector<RiskMeasureSpec>& specs,
                           Index player, const StrategyProfile& others,
                           lp::PivotRule rule = lp::PivotRule::Dantzig);

// Certifies whether no player can lower their ex ante risk by switching to
// any other behavioural strategy (best response computed by LP).
EquilibriumCertificate check_rane(const Game& game,
                                  const std::vector<RiskMeasureSpec>& specs,
                                  const StrategyProfile& profile,
                                  double tol = kValueTol);

// One entry per pure profile: the full certificate against behavioural
// deviations plus the coarser verdict against pure-strategy deviations only.
struct PureProfileRecord {
  std::vector<std::vector<Index>> actions;  // [player][type]
  std::string label;
  std::vector<double> risks;  // per player ex ante risk
  EquilibriumCertificate certificate;
  bool pure_equilibrium = false;  // no pure-strategy deviation profits
};

// Enumerates every pure profile (throws InputError beyond `cap` profiles)
// and certifies each.  Records are in canonical enumeration order.
std::vector<PureProfileRecord> solve_rane_pure(
    const Game& game, const std::vector<RiskMeasureSpec>& specs,
    double tol = kValueTol, std::uint64_t cap = 1000000);

struct IterationConfig {
  int max_iters = 20000;
  double damping = 1.0;  // step size k uses damping / (damping + k)
  double tol = 1e-6;     // certificate tolerance declaring convergence
  std::uint64_t seed = 0;  // 0 starts uniform, otherwise random rows
};

// Damped iterated best response.  Returns the first iterate whose
// certificate passes at config.tol; throws NumericError when max_iters
// iterations pass without one.
StrategyProfile solve_rane_mixed(const Game& game,
                                 const std::vector<RiskMeasureSpec>& specs,
                                 const IterationConfig& config = {});

// ---------------------------------------------------------------------------
// Interim equilibrium without revision
// ---------------------------------------------------------------------------

// Certifies whether any type of any player can lower their unrevised interim
// risk (the ex ante measure applied to the conditional loss on that type's
// cell) by a pure action deviation.  `mixed_deviations` additionally checks
// per-type behavioural deviations through an LP.
EquilibriumCertificate check_rabne(const Game& game,
                                   const std::vector<RiskMeasureSpec>& specs,
                                   const StrategyProfile& profile,
                                   double tol = kValueTol,
                                   bool mixed_deviations = false);

// ---------------------------------------------------------------------------
// Revision and interim equilibrium with revision
// ---------------------------------------------------------------------------

// Builds every player's revision induced by `inducing`.  By default each
// player's dual density is the canonical optimal dual of their own loss; a
// per-player override replaces it after being checked for feasibility and
// optimality (rejected with the optimality gap in the message otherwise).
RevisionProfile build_revision(
    const Game& game, const std::vector<RiskMeasureSpec>& specs,
    const StrategyProfile& inducing,
    const std::vector<std::optional<DualDensity>>& overrides = {});

// The unrevised view packaged as a RevisionProfile: every dual density is
// identically one, so every interim measure keeps its original level.  The
// densities are not required to be optimal for any loss.
RevisionProfile unrevised_revision(const Game& game,
                                   const std::vector<RiskMeasureSpec>& specs,
                                   const StrategyProfile& inducing);

// Certifies whether any type of any player can lower their revised interim
// risk by a pure action deviation, with revisions held fixed at `revision`
// (which may have been induced by a different profile than `profile`).
// `mixed_deviations` additionally minimises over behavioural rows on each
// cell through an LP; hedging across the cell can beat every pure action, so
// this mode is strictly harder to pass.  It needs the revised measure of the
// cell in single-level form, so expectation, tail-average, and worst-case
// sources are supported and spectral or polytope sources are rejected.
EquilibriumCertificate check_rrbne(const Game& game,
                                   const RevisionProfile& revision,
                                   const StrategyProfile& profile,
                                   double tol = kValueTol,
                                   bool mixed_deviations = false);

// ---------------------------------------------------------------------------
// Revision-preference consistency
// ---------------------------------------------------------------------------

// For an ordered pair of profiles (first, second), compares revised interim
// risks of both induced losses cell by cell, once under the revision induced
// by `second` (the premise side) and once under the revision induced by
// `first` (the conclusion side).
//
// Strict mode follows the letter of the consistency property: the premise
// requires first's loss strictly below second's in every cell under second's
// revision, and then asserts the same strict per-cell ordering under first's
// revision.  WeakDominance is the pattern the equilibrium implication proof
// actually consumes: premise "below everywhere, strictly in at least one
// cell", conclusion "still below everywhere, strictly where it was strict".
enum class RprcMode { Strict, WeakDominance };

struct RprcPairRecord {
  std::vector<std::vector<Index>> first;   // deviating profile (pure)
  std::vector<std::vector<Index>> second;  // reference profile (pure)
  bool applicable = false;  // premise held
  bool holds = true;        // conclusion held (true when not applicable)
  std::string detail;       // human-readable cell-level account
};

struct RprcReport {
  Index player = 0;
  RprcMode mode = RprcMode::Strict;
  int checked = 0;
  int applicable = 0;
  int violations = 0;
  std::vector<RprcPairRecord> records;
  bool passed() const { return violations == 0; }
};

RprcReport check_rprc(
    const Game& game, const std::vector<RiskMeasureSpec>& specs, Index player,
    const std::vector<std::pair<std::vector<std::vector<Index>>,
                                std::vector<std::vector<Index>>>>& pairs,
    RprcMode mode = RprcMode::Strict, double tol = kValueTol);

// Samples `num_pairs` ordered pairs of distinct pure profiles uniformly.
RprcReport check_rprc_sampled(const Game& game,
                              const std::vector<RiskMeasureSpec>& specs,
                              Index player, int num_pairs, std::uint64_t seed,
                              RprcMode mode = RprcMode::Strict,
                              double tol = kValueTol);

// ---------------------------------------------------------------------------
// Implication verifiers
// ---------------------------------------------------------------------------

struct ImplicationReport {
  std::string kind;  // "rrbne-implies-rane" | "rane-implies-rrbne"
  bool premises_hold = true;
  std::vector<std::string> premise_notes;
  EquilibriumCertificate antecedent;  // the hypothesis-side certificate
  EquilibriumCertificate consequent;  // the conclusion-side certificate
  bool applicable = false;     // premises hold and antecedent passes
  bool implication_ok = true;  // !applicable or consequent passes
  std::string label;           // caveats, e.g. sampled premises
};

// If `profile` is an interim equilibrium under its own induced revision,
// asserts it is also an ex ante equilibrium.  The hypothesis side is checked
// with mixed cell deviations: the ex ante certificate quantifies over mixed
// strategies, and on its own the action-wise interim condition is too weak
// to carry the conclusion — a hedged row can undercut every action of a cell
// ex ante while each action deviation looks unprofitable in isolation.  With
// the mixed hypothesis the implication is exact: weighting each cell's
// revised risk by its projected dual mass reassembles the ex ante risk of
// the profile, and bounds from below the ex ante risk of every deviation.
ImplicationReport verify_rrbne_implies_rane(
    const Game& game, const std::vector<RiskMeasureSpec>& specs,
    const StrategyProfile& profile, double tol = kValueTol);

// Converse direction.  Premises checked (not proven): full support of the
// prior, strictly positive projected weights for the candidate, for every
// one-action deviation from it, and for `sampled_profiles` random pure
// profiles; revision-preference consistency in WeakDominance mode on the
// one-action deviation pairs plus `sampled_pairs` random pairs.
ImplicationReport verify_rane_implies_rrbne(
    const Game& game, const std::vector<RiskMeasureSpec>& specs,
    const StrategyProfile& profile, double tol = kValueTol,
    int sampled_profiles = 20, int sampled_pairs = 20,
    std::uint64_t seed = 1);

// For one player and an ordered pair (favoured = candidate, rival), checks
// the dominance transfer between prior-weighted averages of revised interim
// risks: if the favoured profile's loss is strictly worse than the rival's
// when both are revised by the rival's dual, the same strict ordering holds
// when both are revised by the favoured profile's own dual.  The weighted
// average under a profile's own revision equals its ex ante risk; both sides
// of that identity are reported.
struct DominanceReport {
  Index player = 0;
  double favoured_under_rival = 0;  // W(z_rival; L_favoured)
  double rival_under_rival = 0;     // W(z_rival; L_rival)
  double favoured_under_own = 0;    // W(z_favoured; L_favoured)
  double rival_under_own = 0;       // W(z_favoured; L_rival)
  double ex_ante_favoured = 0;      // rho(L_favoured), equals favoured_under_own
  double ex_ante_rival = 0;         // rho(L_rival), equals rival_under_rival
  bool premise = false;             // favoured strictly worse under rival
  bool conclusion = false;          // favoured strictly worse under own
  bool pass = true;                 // !premise or conclusion
};

DominanceReport check_weighted_average_dominance(
    const Game& game, const std::vector<RiskMeasureSpec>& specs, Index player,
    const StrategyProfile& favoured, const StrategyProfile& rival,
    double tol = kValueTol);

// ---------------------------------------------------------------------------
// Risk-neutral equivalents and beliefs
// ---------------------------------------------------------------------------

// Per player, the reweighted "as if risk-neutral" distribution q(t) =
// P(t) * Z(t) built from the optimal dual of that player's loss under
// `profile`.  Throws NumericError if q . L fails to reproduce the ex ante
// risk to within 1e-9.
std::vector<std::vector<double>> risk_neutral_equivalent(
    const Game& game, const std::vector<RiskMeasureSpec>& specs,
    const StrategyProfile& profile);

// The interim beliefs derived from a game's prior by conditioning.
BeliefSystem beliefs_from_prior(const Game& game);

struct ConsistencyReport {
  bool consistent = false;
  std::vector<double> prior;  // witness when consistent, empty otherwise
  double min_live_margin = 0;  // smallest live-type mass of the witness
};

// Decides whether some common prior generates every player's interim
// beliefs by conditioning, requiring positive mass on every type listed in
// `live` (defaults to every type of every player).  Solved as a feasibility
// LP maximising the smallest live-type mass.
ConsistencyReport check_belief_consistency(
    const BeliefSystem& beliefs,
    const std::vector<std::vector<Index>>& live = {});

// ---------------------------------------------------------------------------
// Commonization
// ---------------------------------------------------------------------------

struct CommonizedType {
  Index player = 0;
  Index own_type = 0;
  std::vector<double> belief;        // b, over opponent type profiles
  std::vector<double> interim_loss;  // candidate loss seen from this type
  bool singleton = false;            // belief set is exactly {b}
  std::vector<double> improving_direction;  // b' with b'.L < b.L, empty if none
  double attained = 0;               // sup over the belief set of q . L
  bool attainment_ok = false;        // attained == b . L within tolerance
  bool support_ok = false;           // supp(b) inside supp(prior | type)
};

struct CommonizationReport {
  std::vector<double> prior;  // the common reference prior used
  std::vector<CommonizedType> types;
  bool pass = false;  // every attainment and support check passed
};

// Replaces each player's single interim belief with a segment of beliefs
// (from b towards a strictly better-off direction b' when one exists) so
// that worst-case expected interim loss over the set reproduces the
// original interim expected loss, while all players share one fully
// supported reference prior.  The belief set degenerates to {b} exactly
// when b is supported on the minimisers of the interim loss.  `prior`
// overrides the default uniform reference prior.
CommonizationReport commonize(const Game& game, const BeliefSystem& beliefs,
                              const StrategyProfile& profile,
                              const std::vector<double>& prior = {});

}  // namespace riskgame
