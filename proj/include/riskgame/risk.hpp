#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "riskgame/game.hpp"

namespace riskgame {

enum class RiskKind {
  Expectation,
  AVaR,
  EssentialSup,
  SpectralMixture,
  PolytopeDual,
};

// A law-invariant coherent risk measure.  AV@R levels may be given as exact
// rationals so that dual densities and revised levels come out exact on
// dyadic priors; levels given as plain doubles are used as-is.
struct RiskMeasureSpec {
  RiskKind kind = RiskKind::Expectation;
  double alpha = 0.0;
  // den > 0 marks an exact rational level num/den.
  std::int64_t alpha_num = 0;
  std::int64_t alpha_den = 0;
  std::vector<std::pair<double, double>> components;  // (weight, level)
  std::vector<std::vector<double>> vertices;          // dual densities

  static RiskMeasureSpec expectation();
  static RiskMeasureSpec avar(double level);
  static RiskMeasureSpec avar_rational(std::int64_t num, std::int64_t den);
  static RiskMeasureSpec esssup();
  static RiskMeasureSpec spectral(std::vector<std::pair<double, double>> parts);
  static RiskMeasureSpec polytope(std::vector<std::vector<double>> vertices);

  bool rational_level() const { return alpha_den > 0; }
  // Tail mass 1 - alpha for an AV@R spec, computed from the rational form
  // when available.
  double tail() const;
  // Per-atom density cap 1/(1-alpha); +inf at level 1.
  double cap() const;
  std::string describe() const;
};

// A change-of-measure vector over loss atoms.
struct DualDensity {
  std::vector<double> values;
};

// The feasible dual region of a risk measure: evaluate(spec, L) equals the
// maximum of E[L*Z] over densities Z in this set.
struct AmbiguitySet {
  RiskMeasureSpec spec;

  // Membership against a concrete probability vector: Z >= 0, E_P[Z] = 1,
  // plus the variant constraints (AV@R cap, expectation singleton, spectral
  // or polytope hull membership).
  bool contains(const std::vector<double>& probs, const DualDensity& dual,
                double tol = kValueTol) const;
  std::string describe() const;
};

AmbiguitySet ambiguity_set(const RiskMeasureSpec& spec);

// rho(L).  AV@R uses the sort-and-average closed form: the mean of the worst
// (1-alpha) probability mass with a fractionally weighted boundary atom;
// level 1 means the essential supremum.
double evaluate(const RiskMeasureSpec& spec, const RandomLoss& loss);

// A maximizer of E[L*Z] over the spec's dual set.  Deterministic: atoms are
// ranked by loss descending with ties broken by lower index, and the AV@R
// cap is filled greedily down that ranking until the unit budget runs out.
DualDensity optimal_dual(const RiskMeasureSpec& spec, const RandomLoss& loss);

bool is_dual_feasible(const RiskMeasureSpec& spec,
                      const std::vector<double>& probs,
                      const DualDensity& dual, double tol = kValueTol);
bool is_dual_optimal(const RiskMeasureSpec& spec, const RandomLoss& loss,
                     const DualDensity& dual, double tol = kValueTol);

struct CoherenceReport {
  int trials = 0;
  bool monotonicity = true;
  bool convexity = true;
  bool translation_invariance = true;
  bool positive_homogeneity = true;
  bool law_invariance = true;
  std::string counterexample;  // first failure, human readable

  bool passed() const {
    return monotonicity && convexity && translation_invariance &&
           positive_homogeneity && law_invariance;
  }
};

// Randomized audit of the coherence axioms plus law invariance on sampled
// losses.  The overload taking an arbitrary evaluator exists so tests can
// show the audit catches deliberately broken implementations.
CoherenceReport check_coherence(const RiskMeasureSpec& spec, int trials,
                                std::uint64_t seed);
CoherenceReport check_coherence(
    const std::function<double(const RandomLoss&)>& rho, int trials,
    std::uint64_t seed);

}  // namespace riskgame
