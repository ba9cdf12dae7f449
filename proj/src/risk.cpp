#include "riskgame/risk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "riskgame/lp.hpp"
#include "riskgame/rng.hpp"

namespace riskgame {

namespace {

// Atom indices ranked by loss value descending, ties by lower index.
std::vector<Index> rank_by_loss(const std::vector<double>& values) {
  std::vector<Index> order(values.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return values[a] > values[b]; });
  return order;
}

void check_loss(const RandomLoss& loss) {
  if (loss.values.empty()) throw InputError("loss has empty support");
  if (loss.values.size() != loss.probs.size())
    throw InputError("loss values/probabilities length mismatch");
}

double esssup_eval(const RandomLoss& loss) {
  bool any = false;
  double best = 0;
  for (Index i = 0; i < loss.size(); ++i) {
    if (loss.probs[i] > 0 && (!any || loss.values[i] > best)) {
      best = loss.values[i];
      any = true;
    }
  }
  if (!any) throw InputError("loss has empty support");
  return best;
}

// Mean of the worst tail of the distribution, boundary atom taken
// fractionally.  Computed in reweighted form -- atoms absorb density up to
// `cap` = 1/tail until the unit budget is spent -- so that dyadic priors with
// exactly representable caps evaluate without rounding.
double avar_eval(double cap, const RandomLoss& loss) {
  if (!(cap < lp::kInf)) return esssup_eval(loss);
  double budget = 1.0, acc = 0;
  for (Index i : rank_by_loss(loss.values)) {
    if (loss.probs[i] <= 0) continue;
    double mass = std::min(loss.probs[i] * cap, budget);
    acc += mass * loss.values[i];
    budget -= mass;
    if (budget <= 1e-15) break;
  }
  return acc;
}

void check_polytope(const RiskMeasureSpec& spec, const RandomLoss& loss) {
  for (Index k = 0; k < spec.vertices.size(); ++k) {
    const auto& v = spec.vertices[k];
    if (v.size() != loss.size())
      throw InputError("polytope vertex length does not match atom count");
    double mean = 0;
    for (Index i = 0; i < v.size(); ++i) mean += loss.probs[i] * v[i];
    if (std::abs(mean - 1.0) > kValueTol)
      throw InputError("polytope vertex " + std::to_string(k) +
                       " is not a density: mean " + std::to_string(mean));
  }
}

}  // namespace

RiskMeasureSpec RiskMeasureSpec::expectation() {
  RiskMeasureSpec s;
  s.kind = RiskKind::Expectation;
  return s;
}

RiskMeasureSpec RiskMeasureSpec::avar(double level) {
  if (!(level >= 0.0 && level <= 1.0))
    throw InputError("avar level must lie in [0,1]");
  RiskMeasureSpec s;
  s.kind = RiskKind::AVaR;
  s.alpha = level;
  return s;
}

RiskMeasureSpec RiskMeasureSpec::avar_rational(std::int64_t num,
                                               std::int64_t den) {
  if (den <= 0 || num < 0 || num > den)
    throw InputError("avar level must be a rational in [0,1]");
  RiskMeasureSpec s;
  s.kind = RiskKind::AVaR;
  s.alpha_num = num;
  s.alpha_den = den;
  s.alpha = static_cast<double>(num) / static_cast<double>(den);
  return s;
}

RiskMeasureSpec RiskMeasureSpec::esssup() {
  RiskMeasureSpec s;
  s.kind = RiskKind::EssentialSup;
  return s;
}

RiskMeasureSpec RiskMeasureSpec::spectral(
    std::vector<std::pair<double, double>> parts) {
  double total = 0;
  for (auto [w, level] : parts) {
    if (w < 0) throw InputError("spectral weight must be nonnegative");
    if (!(level >= 0.0 && level <= 1.0))
      throw InputError("spectral level must lie in [0,1]");
    total += w;
  }
  if (std::abs(total - 1.0) > kValueTol)
    throw InputError("spectral weights must sum to 1");
  RiskMeasureSpec s;
  s.kind = RiskKind::SpectralMixture;
  s.components = std::move(parts);
  return s;
}

RiskMeasureSpec RiskMeasureSpec::polytope(
    std::vector<std::vector<double>> vertices) {
  if (vertices.empty()) throw InputError("polytope needs at least one vertex");
  for (const auto& v : vertices)
    for (double x : v)
      if (x < -1e-12 || !std::isfinite(x))
        throw InputError("polytope vertex entries must be nonnegative");
  RiskMeasureSpec s;
  s.kind = RiskKind::PolytopeDual;
  s.vertices = std::move(vertices);
  return s;
}

double RiskMeasureSpec::tail() const {
  if (rational_level())
    return static_cast<double>(alpha_den - alpha_num) /
           static_cast<double>(alpha_den);
  return 1.0 - alpha;
}

double RiskMeasureSpec::cap() const {
  if (rational_level()) {
    if (alpha_num == alpha_den) return lp::kInf;
    return static_cast<double>(alpha_den) /
           static_cast<double>(alpha_den - alpha_num);
  }
  double t = 1.0 - alpha;
  return t <= 1e-12 ? lp::kInf : 1.0 / t;
}

std::string RiskMeasureSpec::describe() const {
  std::ostringstream os;
  switch (kind) {
    case RiskKind::Expectation: return "expectation";
    case RiskKind::EssentialSup: return "esssup";
    case RiskKind::AVaR:
      if (rational_level())
        os << "avar(" << alpha_num << "/" << alpha_den << ")";
      else
        os << "avar(" << alpha << ")";
      return os.str();
    case RiskKind::SpectralMixture:
      os << "spectral(" << components.size() << " components)";
      return os.str();
    case RiskKind::PolytopeDual:
      os << "polytope(" << vertices.size() << " vertices)";
      return os.str();
  }
  return "unknown";
}

double evaluate(const RiskMeasureSpec& spec, const RandomLoss& loss) {
  check_loss(loss);
  switch (spec.kind) {
    case RiskKind::Expectation:
      return loss.mean();
    case RiskKind::EssentialSup:
      return esssup_eval(loss);
    case RiskKind::AVaR:
      return avar_eval(spec.cap(), loss);
    case RiskKind::SpectralMixture: {
      double acc = 0;
      for (auto [w, level] : spec.components)
        acc += w * avar_eval(RiskMeasureSpec::avar(level).cap(), loss);
      return acc;
    }
    case RiskKind::PolytopeDual: {
      check_polytope(spec, loss);
      double best = 0;
      bool first = true;
      for (const auto& v : spec.vertices) {
        double e = 0;
        for (Index i = 0; i < loss.size(); ++i)
          e += loss.probs[i] * loss.values[i] * v[i];
        if (first || e > best) best = e, first = false;
      }
      return best;
    }
  }
  throw InputError("unknown risk measure kind");
}

DualDensity optimal_dual(const RiskMeasureSpec& spec, const RandomLoss& loss) {
  check_loss(loss);
  const Index n = loss.size();
  DualDensity dual;
  switch (spec.kind) {
    case RiskKind::Expectation:
      dual.values.assign(n, 1.0);
      return dual;
    case RiskKind::EssentialSup: {
      dual.values.assign(n, 0.0);
      for (Index i : rank_by_loss(loss.values)) {
        if (loss.probs[i] > 0) {
          dual.values[i] = 1.0 / loss.probs[i];
          return dual;
        }
      }
      throw InputError("loss has empty support");
    }
    case RiskKind::AVaR: {
      double c = spec.cap();
      if (c == lp::kInf) return optimal_dual(RiskMeasureSpec::esssup(), loss);
      dual.values.assign(n, 0.0);
      double budget = 1.0;  // probability mass still to be reweighted
      for (Index i : rank_by_loss(loss.values)) {
        if (budget <= 0) break;
        if (loss.probs[i] <= 0) continue;
        double mass = std::min(loss.probs[i] * c, budget);
        dual.values[i] = mass / loss.probs[i];
        budget -= mass;
      }
      return dual;
    }
    case RiskKind::SpectralMixture: {
      dual.values.assign(n, 0.0);
      for (auto [w, level] : spec.components) {
        DualDensity part = optimal_dual(RiskMeasureSpec::avar(level), loss);
        for (Index i = 0; i < n; ++i) dual.values[i] += w * part.values[i];
      }
      return dual;
    }
    case RiskKind::PolytopeDual: {
      check_polytope(spec, loss);
      Index best = 0;
      double best_val = 0;
      for (Index k = 0; k < spec.vertices.size(); ++k) {
        double e = 0;
        for (Index i = 0; i < n; ++i)
          e += loss.probs[i] * loss.values[i] * spec.vertices[k][i];
        if (k == 0 || e > best_val) best_val = e, best = k;
      }
      dual.values = spec.vertices[best];
      return dual;
    }
  }
  throw InputError("unknown risk measure kind");
}

bool AmbiguitySet::contains(const std::vector<double>& probs,
                            const DualDensity& dual, double tol) const {
  const auto& z = dual.values;
  if (z.size() != probs.size())
    throw InputError("dual density length does not match atom count");
  double mean = 0;
  for (Index i = 0; i < z.size(); ++i) {
    if (z[i] < -tol) return false;
    mean += probs[i] * z[i];
  }
  if (std::abs(mean - 1.0) > tol) return false;

  switch (spec.kind) {
    case RiskKind::EssentialSup:
      return true;
    case RiskKind::Expectation:
      for (Index i = 0; i < z.size(); ++i)
        if (probs[i] > 0 && std::abs(z[i] - 1.0) > tol) return false;
      return true;
    case RiskKind::AVaR: {
      double c = spec.cap();
      if (c == lp::kInf) return true;
      for (double v : z)
        if (v > c + tol) return false;
      return true;
    }
    case RiskKind::SpectralMixture: {
      // Z must decompose as sum_k w_k Z_k with each Z_k in the AV@R(level_k)
      // dual set; checked as an LP feasibility problem.
      lp::LinearProgram prog;
      const Index n = z.size();
      std::vector<Index> var(spec.components.size() * n);
      for (Index k = 0; k < spec.components.size(); ++k) {
        double c = RiskMeasureSpec::avar(spec.components[k].second).cap();
        for (Index i = 0; i < n; ++i)
          var[k * n + i] = prog.add_variable(0.0, 0.0, c);
      }
      for (Index k = 0; k < spec.components.size(); ++k) {
        std::vector<std::pair<Index, double>> row;
        for (Index i = 0; i < n; ++i)
          if (probs[i] != 0) row.push_back({var[k * n + i], probs[i]});
        prog.add_row(std::move(row), lp::Rel::Eq, 1.0);
      }
      for (Index i = 0; i < n; ++i) {
        std::vector<std::pair<Index, double>> row;
        for (Index k = 0; k < spec.components.size(); ++k)
          row.push_back({var[k * n + i], spec.components[k].first});
        prog.add_row(row, lp::Rel::Le, z[i] + tol);
        prog.add_row(std::move(row), lp::Rel::Ge, z[i] - tol);
      }
      return lp::solve(prog).status == lp::Status::Optimal;
    }
    case RiskKind::PolytopeDual: {
      // Hull membership as an LP feasibility problem.
      lp::LinearProgram prog;
      const Index n = z.size();
      std::vector<Index> lam(spec.vertices.size());
      for (Index k = 0; k < spec.vertices.size(); ++k)
        lam[k] = prog.add_variable(0.0, 0.0, 1.0);
      {
        std::vector<std::pair<Index, double>> row;
        for (Index k = 0; k < lam.size(); ++k) row.push_back({lam[k], 1.0});
        prog.add_row(std::move(row), lp::Rel::Eq, 1.0);
      }
      for (Index i = 0; i < n; ++i) {
        std::vector<std::pair<Index, double>> row;
        for (Index k = 0; k < lam.size(); ++k)
          row.push_back({lam[k], spec.vertices[k][i]});
        prog.add_row(row, lp::Rel::Le, z[i] + tol);
        prog.add_row(std::move(row), lp::Rel::Ge, z[i] - tol);
      }
      return lp::solve(prog).status == lp::Status::Optimal;
    }
  }
  throw InputError("unknown risk measure kind");
}

std::string AmbiguitySet::describe() const {
  switch (spec.kind) {
    case RiskKind::Expectation:
      return "singleton {Z == 1}";
    case RiskKind::EssentialSup:
      return "all densities on the support";
    case RiskKind::AVaR: {
      std::ostringstream os;
      os << "box 0 <= Z <= " << spec.cap() << " with E[Z] = 1";
      return os.str();
    }
    case RiskKind::SpectralMixture:
      return "weighted sum of avar boxes";
    case RiskKind::PolytopeDual: {
      std::ostringstream os;
      os << "convex hull of " << spec.vertices.size() << " densities";
      return os.str();
    }
  }
  return "unknown";
}

AmbiguitySet ambiguity_set(const RiskMeasureSpec& spec) {
  return AmbiguitySet{spec};
}

bool is_dual_feasible(const RiskMeasureSpec& spec,
                      const std::vector<double>& probs,
                      const DualDensity& dual, double tol) {
  return ambiguity_set(spec).contains(probs, dual, tol);
}

bool is_dual_optimal(const RiskMeasureSpec& spec, const RandomLoss& loss,
                     const DualDensity& dual, double tol) {
  check_loss(loss);
  if (!is_dual_feasible(spec, loss.probs, dual, tol)) return false;
  double e = 0;
  for (Index i = 0; i < loss.size(); ++i)
    e += loss.probs[i] * loss.values[i] * dual.values[i];
  return std::abs(e - evaluate(spec, loss)) <= tol;
}

namespace {

std::string describe_loss(const RandomLoss& loss) {
  std::ostringstream os;
  os.precision(12);
  os << "values [";
  for (Index i = 0; i < loss.size(); ++i)
    os << (i ? ", " : "") << loss.values[i];
  os << "] probs [";
  for (Index i = 0; i < loss.size(); ++i)
    os << (i ? ", " : "") << loss.probs[i];
  os << "]";
  return os.str();
}

}  // namespace

CoherenceReport check_coherence(
    const std::function<double(const RandomLoss&)>& rho, int trials,
    std::uint64_t seed) {
  Rng rng(seed);
  CoherenceReport rep;
  rep.trials = trials;
  auto tol_for = [](double scale) { return 1e-9 * std::max(1.0, std::abs(scale)); };
  auto fail = [&rep](bool& flag, const std::string& msg) {
    flag = false;
    if (rep.counterexample.empty()) rep.counterexample = msg;
  };

  for (int t = 0; t < trials; ++t) {
    Index n = 2 + rng.below(5);
    RandomLoss a, b;
    a.probs = b.probs = rng.simplex(n);
    a.values.resize(n);
    b.values.resize(n);
    for (Index i = 0; i < n; ++i) {
      a.values[i] = rng.uniform(-50, 150);
      b.values[i] = rng.uniform(-50, 150);
    }
    double ra = rho(a), rb = rho(b);

    // Monotonicity: adding a nonnegative amount cannot lower the risk.
    RandomLoss hi = a;
    for (Index i = 0; i < n; ++i) hi.values[i] += rng.uniform(0, 30);
    if (rep.monotonicity && ra > rho(hi) + tol_for(ra))
      fail(rep.monotonicity, "monotonicity: rho(L) > rho(L + nonneg) for " +
                                 describe_loss(a));

    // Convexity of mixtures with shared probabilities.
    double lam = rng.u01();
    RandomLoss mix;
    mix.probs = a.probs;
    mix.values.resize(n);
    for (Index i = 0; i < n; ++i)
      mix.values[i] = lam * a.values[i] + (1 - lam) * b.values[i];
    double bound = lam * ra + (1 - lam) * rb;
    if (rep.convexity && rho(mix) > bound + tol_for(bound))
      fail(rep.convexity, "convexity violated at lambda " + std::to_string(lam) +
                              " for " + describe_loss(a));

    // Translation invariance.
    double c = rng.uniform(-20, 20);
    RandomLoss shifted = a;
    for (Index i = 0; i < n; ++i) shifted.values[i] += c;
    if (rep.translation_invariance &&
        std::abs(rho(shifted) - (ra + c)) > tol_for(ra + c))
      fail(rep.translation_invariance,
           "translation: rho(L + " + std::to_string(c) + ") != rho(L) + c for " +
               describe_loss(a));

    // Positive homogeneity.
    double s = rng.uniform(0.05, 3.0);
    RandomLoss scaled = a;
    for (Index i = 0; i < n; ++i) scaled.values[i] *= s;
    if (rep.positive_homogeneity &&
        std::abs(rho(scaled) - s * ra) > tol_for(s * ra))
      fail(rep.positive_homogeneity,
           "homogeneity: rho(" + std::to_string(s) + " L) != s rho(L) for " +
               describe_loss(a));

    // Law invariance: permuting equal-probability atoms changes nothing.
    RandomLoss u, pu;
    u.probs.assign(n, 1.0 / static_cast<double>(n));
    u.values.resize(n);
    for (Index i = 0; i < n; ++i) u.values[i] = rng.uniform(-50, 150);
    pu = u;
    for (Index i = n; i-- > 1;)
      std::swap(pu.values[i], pu.values[rng.below(i + 1)]);
    double ru = rho(u);
    if (rep.law_invariance && std::abs(ru - rho(pu)) > tol_for(ru))
      fail(rep.law_invariance,
           "law invariance: permutation changed the value for " +
               describe_loss(u));
  }
  return rep;
}

CoherenceReport check_coherence(const RiskMeasureSpec& spec, int trials,
                                std::uint64_t seed) {
  return check_coherence(
      [&spec](const RandomLoss& loss) { return evaluate(spec, loss); }, trials,
      seed);
}

}  // namespace riskgame
