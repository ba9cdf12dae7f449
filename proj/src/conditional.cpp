#include "riskgame/conditional.hpp"

#include <algorithm>
#include <cmath>

#include "riskgame/lp.hpp"
#include "riskgame/rng.hpp"

namespace riskgame {

namespace {

double cell_mass(const std::vector<double>& prior,
                 const std::vector<Index>& cell) {
  double m = 0;
  for (Index t : cell) m += prior[t];
  return m;
}

void check_weight(const RiskMeasureSpec& source, double z) {
  if (z < -1e-12) throw InputError("infeasible conditional dual: negative weight");
  if (source.kind == RiskKind::AVaR) {
    double c = source.cap();
    if (c != lp::kInf && z > c + kValueTol)
      throw InputError("infeasible conditional dual: weight exceeds cap");
  }
  if (source.kind == RiskKind::Expectation && std::abs(z - 1.0) > kValueTol)
    throw InputError(
        "infeasible conditional dual: expectation admits only weight 1");
}

}  // namespace

ConditionalDual project_dual(const DualDensity& dual,
                             const InformationPartition& partition,
                             const std::vector<double>& prior) {
  ConditionalDual cond;
  cond.owner = partition.owner;
  cond.weights.resize(partition.cells.size());
  for (Index c = 0; c < partition.cells.size(); ++c) {
    double mass = cell_mass(prior, partition.cells[c]);
    if (!(mass > 0))
      throw InputError("zero-mass cell: cannot project a dual onto type index " +
                       std::to_string(c));
    double acc = 0;
    for (Index t : partition.cells[c])
      acc += prior[t] * dual.values.at(t);
    cond.weights[c] = acc / mass;
  }
  return cond;
}

double revised_level(double alpha, double z) {
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw InputError("revised_level needs a level in [0,1)");
  double cap = 1.0 / (1.0 - alpha);
  if (z < -1e-12 || z > cap + kValueTol)
    throw InputError("infeasible conditional dual: weight " +
                     std::to_string(z) + " outside [0, " + std::to_string(cap) +
                     "]");
  double level = 1.0 - (1.0 - alpha) * z;
  return std::min(1.0, std::max(0.0, level));
}

double revised_level(const RiskMeasureSpec& avar_spec, double z) {
  if (avar_spec.kind != RiskKind::AVaR)
    throw InputError("revised_level needs an avar source");
  if (!avar_spec.rational_level()) return revised_level(avar_spec.alpha, z);
  // (den - (den-num) z) / den keeps dyadic weights exact.
  double den = static_cast<double>(avar_spec.alpha_den);
  double tailnum = static_cast<double>(avar_spec.alpha_den - avar_spec.alpha_num);
  double cap = avar_spec.cap();
  if (z < -1e-12 || (cap != lp::kInf && z > cap + kValueTol))
    throw InputError("infeasible conditional dual: weight outside the cap");
  double level = (den - tailnum * z) / den;
  return std::min(1.0, std::max(0.0, level));
}

RevisedInterimMeasure revise_interim(const RiskMeasureSpec& source,
                                     const ConditionalDual& cond,
                                     Index own_type) {
  double z = cond.weights.at(own_type);
  check_weight(source, z);
  RevisedInterimMeasure m;
  m.owner = cond.owner;
  m.own_type = own_type;
  m.source = source;
  m.weight = z;
  if (source.kind == RiskKind::AVaR) {
    m.has_revised_level = true;
    m.revised_alpha = revised_level(source, z);
  }
  return m;
}

double conditional_evaluate(const RiskMeasureSpec& source,
                            const ConditionalDual& cond,
                            const RandomLoss& loss,
                            const InformationPartition& partition,
                            Index own_type) {
  double z = cond.weights.at(own_type);
  check_weight(source, z);
  RandomLoss cell = restrict_loss(loss, partition, own_type);
  switch (source.kind) {
    case RiskKind::Expectation:
      return cell.mean();
    case RiskKind::EssentialSup:
      // Any conditional density is admissible, so the cell supremum.
      return evaluate(RiskMeasureSpec::esssup(), cell);
    case RiskKind::AVaR: {
      double level = revised_level(source, z);
      RiskMeasureSpec revised = RiskMeasureSpec::avar(level);
      return evaluate(revised, cell);
    }
    case RiskKind::SpectralMixture:
    case RiskKind::PolytopeDual:
      return conditional_evaluate_via_lp(source, cond, loss, partition,
                                         own_type);
  }
  throw InputError("unknown risk measure kind");
}

double conditional_evaluate_via_lp(const RiskMeasureSpec& source,
                                   const ConditionalDual& cond,
                                   const RandomLoss& loss,
                                   const InformationPartition& partition,
                                   Index own_type) {
  const Index n = loss.size();
  const auto& probs = loss.probs;
  double target_mass = cell_mass(probs, partition.cells.at(own_type));
  if (!(target_mass > 0))
    throw InputError("zero-mass cell: cannot condition on type index " +
                     std::to_string(own_type));

  // Cell weight per atom.
  std::vector<double> zx(n, 0.0);
  for (Index c = 0; c < partition.cells.size(); ++c)
    for (Index t : partition.cells[c]) zx[t] = cond.weights.at(c);

  lp::LinearProgram prog;
  prog.sense = lp::Sense::Maximize;
  // Z' per atom; objective weights only the target cell.
  std::vector<Index> zp(n);
  for (Index t = 0; t < n; ++t) {
    bool in_cell =
        std::find(partition.cells[own_type].begin(),
                  partition.cells[own_type].end(), t) !=
        partition.cells[own_type].end();
    double obj = in_cell ? probs[t] / target_mass * loss.values[t] : 0.0;
    zp[t] = prog.add_variable(obj, 0.0, lp::kInf);
  }
  // E[Z' | cell] = 1 for every cell with positive mass.
  for (const auto& cell : partition.cells) {
    double mass = cell_mass(probs, cell);
    if (!(mass > 0)) continue;
    std::vector<std::pair<Index, double>> row;
    for (Index t : cell)
      if (probs[t] != 0) row.push_back({zp[t], probs[t]});
    prog.add_row(std::move(row), lp::Rel::Eq, mass);
  }

  // Global membership of z * Z' in the source dual set.
  switch (source.kind) {
    case RiskKind::Expectation:
      for (Index t = 0; t < n; ++t)
        if (probs[t] > 0)
          prog.add_row({{zp[t], zx[t]}}, lp::Rel::Eq, 1.0);
      break;
    case RiskKind::EssentialSup:
      break;  // only nonnegativity and mean one, both already present
    case RiskKind::AVaR: {
      double c = source.cap();
      if (c != lp::kInf)
        for (Index t = 0; t < n; ++t)
          if (zx[t] > 0) prog.add_row({{zp[t], zx[t]}}, lp::Rel::Le, c);
      break;
    }
    case RiskKind::SpectralMixture: {
      // z Z' = sum_k w_k Z_k with Z_k in the component box and E[Z_k] = 1.
      std::vector<Index> comp(source.components.size() * n);
      for (Index k = 0; k < source.components.size(); ++k) {
        double capk = RiskMeasureSpec::avar(source.components[k].second).cap();
        for (Index t = 0; t < n; ++t)
          comp[k * n + t] = prog.add_variable(0.0, 0.0, capk);
      }
      for (Index k = 0; k < source.components.size(); ++k) {
        std::vector<std::pair<Index, double>> row;
        for (Index t = 0; t < n; ++t)
          if (probs[t] != 0) row.push_back({comp[k * n + t], probs[t]});
        prog.add_row(std::move(row), lp::Rel::Eq, 1.0);
      }
      for (Index t = 0; t < n; ++t) {
        std::vector<std::pair<Index, double>> row{{zp[t], zx[t]}};
        for (Index k = 0; k < source.components.size(); ++k)
          row.push_back({comp[k * n + t], -source.components[k].first});
        prog.add_row(std::move(row), lp::Rel::Eq, 0.0);
      }
      break;
    }
    case RiskKind::PolytopeDual: {
      std::vector<Index> lam(source.vertices.size());
      for (Index k = 0; k < lam.size(); ++k)
        lam[k] = prog.add_variable(0.0, 0.0, 1.0);
      std::vector<std::pair<Index, double>> sum;
      for (Index k = 0; k < lam.size(); ++k) sum.push_back({lam[k], 1.0});
      prog.add_row(std::move(sum), lp::Rel::Eq, 1.0);
      for (Index t = 0; t < n; ++t) {
        std::vector<std::pair<Index, double>> row{{zp[t], zx[t]}};
        for (Index k = 0; k < lam.size(); ++k)
          row.push_back({lam[k], -source.vertices[k][t]});
        prog.add_row(std::move(row), lp::Rel::Eq, 0.0);
      }
      break;
    }
  }

  lp::Solution sol = lp::solve(prog);
  if (sol.status == lp::Status::Infeasible)
    throw InputError("infeasible conditional dual for " + source.describe());
  if (sol.status != lp::Status::Optimal)
    throw NumericError("conditional evaluation LP failed");
  return sol.objective;
}

double weighted_interim_average(const RiskMeasureSpec& source,
                                const ConditionalDual& cond,
                                const RandomLoss& loss,
                                const InformationPartition& partition) {
  double acc = 0;
  for (Index c = 0; c < partition.cells.size(); ++c) {
    double mass = cell_mass(loss.probs, partition.cells[c]);
    if (cond.weights[c] <= 0) continue;  // zero weight kills the term
    acc += mass * cond.weights[c] *
           conditional_evaluate(source, cond, loss, partition, c);
  }
  return acc;
}

DecompositionReport verify_decomposition(const RiskMeasureSpec& spec,
                                         const RandomLoss& loss,
                                         const InformationPartition& partition,
                                         int samples, std::uint64_t seed) {
  DecompositionReport rep;
  rep.ex_ante = evaluate(spec, loss);

  auto weighted_average = [&](const ConditionalDual& cond) {
    return weighted_interim_average(spec, cond, loss, partition);
  };

  DualDensity best = optimal_dual(spec, loss);
  ConditionalDual cond = project_dual(best, partition, loss.probs);
  rep.attained = weighted_average(cond);

  // Feasible conditional duals sampled as projections of random feasible
  // ex ante duals (convex combinations of optimal duals of random losses).
  Rng rng(seed);
  rep.max_sampled = rep.attained;
  for (int k = 0; k < samples; ++k) {
    DualDensity mixed;
    mixed.values.assign(loss.size(), 0.0);
    Index parts = 1 + rng.below(3);
    auto w = rng.simplex(parts);
    for (Index p = 0; p < parts; ++p) {
      RandomLoss fake;
      fake.probs = loss.probs;
      fake.values.resize(loss.size());
      for (auto& v : fake.values) v = rng.uniform(-10, 10);
      DualDensity d = optimal_dual(spec, fake);
      for (Index t = 0; t < loss.size(); ++t)
        mixed.values[t] += w[p] * d.values[t];
    }
    double val = weighted_average(project_dual(mixed, partition, loss.probs));
    rep.max_sampled = std::max(rep.max_sampled, val);
  }

  rep.gap = std::max(std::abs(rep.attained - rep.ex_ante),
                     rep.max_sampled - rep.ex_ante);
  rep.pass = std::abs(rep.attained - rep.ex_ante) <= kValueTol &&
             rep.max_sampled <= rep.ex_ante + kValueTol;
  return rep;
}

}  // namespace riskgame
