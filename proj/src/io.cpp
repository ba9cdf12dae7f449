#include "riskgame/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"
#include "riskgame/rng.hpp"

namespace riskgame {

namespace {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Error anchoring
// ---------------------------------------------------------------------------

// 1-based line of a byte offset in `text`.
int line_of_byte(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

// 1-based line of the first occurrence of a JSON key in `text`; 0 when the
// key never appears (e.g. the input is not even an object).
int line_of_key(const std::string& text, const std::string& key) {
  std::size_t pos = text.find("\"" + key + "\"");
  if (pos == std::string::npos) return 0;
  return line_of_byte(text, pos);
}

[[noreturn]] void fail(const std::string& origin, int line,
                       const std::string& message) {
  std::ostringstream os;
  os << origin;
  if (line > 0) os << ":" << line;
  os << ": " << message;
  throw InputError(os.str());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json parse_json(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(origin, line_of_byte(text, e.byte > 0 ? e.byte - 1 : 0),
         std::string("malformed JSON: ") + e.what());
  }
}

const Json& need_key(const Json& obj, const std::string& key,
                     const std::string& text, const std::string& origin) {
  if (!obj.is_object()) fail(origin, 1, "expected a JSON object at top level");
  auto it = obj.find(key);
  if (it == obj.end()) fail(origin, 1, "missing key \"" + key + "\"");
  return *it;
}

std::vector<std::string> string_array(const Json& j, const std::string& what,
                                      const std::string& text,
                                      const std::string& origin,
                                      const std::string& anchor) {
  if (!j.is_array() || j.empty())
    fail(origin, line_of_key(text, anchor),
         what + " must be a non-empty array of strings");
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string())
      fail(origin, line_of_key(text, anchor),
           what + " must contain strings only");
    out.push_back(v.get<std::string>());
  }
  std::set<std::string> uniq(out.begin(), out.end());
  if (uniq.size() != out.size())
    fail(origin, line_of_key(text, anchor), what + " contains duplicates");
  return out;
}

std::vector<double> number_array(const Json& j, const std::string& what,
                                 const std::string& text,
                                 const std::string& origin,
                                 const std::string& anchor) {
  if (!j.is_array())
    fail(origin, line_of_key(text, anchor), what + " must be an array");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number())
      fail(origin, line_of_key(text, anchor),
           what + " must contain numbers only");
    out.push_back(v.get<double>());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Small formatting helpers
// ---------------------------------------------------------------------------

// Renders x as "p/q" when it is (within 1e-9) a fraction with q <= 64,
// otherwise as a short decimal.  Used for levels and dual weights.
std::string rational_text(double x) {
  for (long long q = 1; q <= 64; ++q) {
    double scaled = x * static_cast<double>(q);
    long long p = std::llround(scaled);
    if (std::abs(scaled - static_cast<double>(p)) <= 1e-9 * q) {
      long long g = std::gcd(std::llabs(p), q);
      long long pn = p / g, qn = q / g;
      std::ostringstream os;
      if (qn == 1)
        os << pn;
      else
        os << pn << "/" << qn;
      return os.str();
    }
  }
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

std::string interim_measure_text(const RevisedInterimMeasure& m) {
  switch (m.source.kind) {
    case RiskKind::Expectation:
      return "expectation";
    case RiskKind::EssentialSup:
      return "esssup";
    case RiskKind::AVaR:
      if (m.weight <= kValueTol) return "esssup";
      return "avar(" + rational_text(m.revised_alpha) + ")";
    case RiskKind::SpectralMixture:
    case RiskKind::PolytopeDual:
      return m.source.describe() + " constrained by weight " +
             rational_text(m.weight);
  }
  return "unknown";
}

// A minimal GitHub-style table builder.
struct MdTable {
  std::vector<std::string> headers;
  std::vector<std::vector<std::string>> rows;

  void render(std::ostringstream& os) const {
    os << "|";
    for (const auto& h : headers) os << " " << h << " |";
    os << "\n|";
    for (std::size_t k = 0; k < headers.size(); ++k) os << " --- |";
    os << "\n";
    for (const auto& row : rows) {
      os << "|";
      for (const auto& c : row) os << " " << c << " |";
      os << "\n";
    }
  }
};

std::string underline(const std::string& s) { return "<u>" + s + "</u>"; }

// ---------------------------------------------------------------------------
// JSON views of report types
// ---------------------------------------------------------------------------

std::string type_label(const Game& game, Index player, Index own_type) {
  return game.types[player][own_type];
}

Json certificate_json(const Game& game, const EquilibriumCertificate& cert) {
  Json out;
  out["kind"] = cert.kind;
  out["tol"] = cert.tol;
  out["equilibrium"] = cert.equilibrium;
  Json records = Json::array();
  for (const auto& r : cert.records) {
    Json rec;
    rec["player"] = game.players[r.player];
    if (r.own_type == kNoType)
      rec["type"] = nullptr;
    else
      rec["type"] = type_label(game, r.player, r.own_type);
    rec["incumbent"] = r.incumbent;
    rec["best_deviation"] = r.best_deviation;
    rec["gain"] = r.gain;
    rec["deviation"] = r.deviation_label;
    records.push_back(std::move(rec));
  }
  out["records"] = std::move(records);
  return out;
}

Json revision_json(const Game& game, const RevisionProfile& rev) {
  Json out = Json::array();
  for (Index i = 0; i < game.num_players(); ++i) {
    Json p;
    p["player"] = game.players[i];
    p["measure"] = rev.sources[i].describe();
    p["dual"] = rev.duals[i].values;
    Json types = Json::array();
    for (Index ti = 0; ti < game.types[i].size(); ++ti) {
      Json t;
      t["type"] = type_label(game, i, ti);
      t["weight"] = rev.conditionals[i].weights[ti];
      t["interim_measure"] = interim_measure_text(rev.interim[i][ti]);
      types.push_back(std::move(t));
    }
    p["types"] = std::move(types);
    out.push_back(std::move(p));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pure strategy enumeration (for grids and labels)
// ---------------------------------------------------------------------------

std::vector<std::vector<Index>> pure_strategies_of(const Game& game,
                                                   Index player) {
  const Index nT = game.types[player].size();
  const Index nA = game.actions[player].size();
  std::vector<std::vector<Index>> out;
  std::vector<Index> cur(nT, 0);
  while (true) {
    out.push_back(cur);
    Index k = nT;
    while (k > 0) {
      if (++cur[k - 1] < nA) break;
      cur[k - 1] = 0;
      --k;
    }
    if (k == 0) break;
  }
  return out;
}

std::string strategy_label(const Game& game, Index player,
                           const std::vector<Index>& assignment) {
  std::string s;
  for (Index a : assignment) s += game.actions[player][a];
  return s;
}

// ---------------------------------------------------------------------------
// Interim tables (markdown)
// ---------------------------------------------------------------------------

// Interim value of a fixed loss on one cell under the unrevised measure;
// polytope sets have no law-invariant conditional form and go through the
// constrained evaluation with unit weights.
double interim_unrevised(const RiskMeasureSpec& spec, const RandomLoss& loss,
                         const InformationPartition& part, Index ti) {
  if (spec.kind == RiskKind::PolytopeDual) {
    ConditionalDual unit;
    unit.owner = part.owner;
    unit.weights.assign(part.cells.size(), 1.0);
    return conditional_evaluate(spec, unit, loss, part, ti);
  }
  return evaluate(spec, restrict_loss(loss, part, ti));
}

std::string opponent_profile_label(const Game& game, Index player,
                                   Index flat_type) {
  std::string s;
  for (Index j = 0; j < game.num_players(); ++j) {
    if (j == player) continue;
    s += game.types[j][game.type_space.coordinate(flat_type, j)];
  }
  return s;
}

// One table per (player, type): rows are the player's actions, columns the
// conditional losses per opponent type profile, last column the interim
// risk.  The lowest risk in each table is underlined.  `value` evaluates a
// candidate loss on a cell; `measure` names the cell's risk measure.
template <typename ValueFn, typename MeasureFn>
void interim_tables_md(std::ostringstream& os, const Game& game,
                       const StrategyProfile& profile, ValueFn value,
                       MeasureFn measure) {
  for (Index i = 0; i < game.num_players(); ++i) {
    InformationPartition part = InformationPartition::of_player(game, i);
    const Index nA = game.actions[i].size();
    // Candidate losses: player i plays each action at every type.
    std::vector<RandomLoss> losses;
    for (Index a = 0; a < nA; ++a) {
      StrategyProfile dev = profile;
      dev.strategies[i] = BehavioralStrategy::pure(
          game, i, std::vector<Index>(game.types[i].size(), a));
      losses.push_back(average_loss(game, dev, i));
    }
    for (Index ti = 0; ti < game.types[i].size(); ++ti) {
      os << "\n**player " << game.players[i] << ", type "
         << type_label(game, i, ti) << "** (" << measure(i, ti) << ")\n\n";
      MdTable table;
      table.headers.push_back("action");
      for (Index t : part.cells[ti])
        table.headers.push_back(opponent_profile_label(game, i, t));
      table.headers.push_back("risk");
      std::vector<double> risks(nA);
      for (Index a = 0; a < nA; ++a) risks[a] = value(i, ti, losses[a]);
      double best = *std::min_element(risks.begin(), risks.end());
      for (Index a = 0; a < nA; ++a) {
        std::vector<std::string> row{game.actions[i][a]};
        for (Index t : part.cells[ti])
          row.push_back(format_one_decimal(losses[a].values[t]));
        std::string r = format_one_decimal(risks[a]);
        row.push_back(risks[a] <= best + kValueTol ? underline(r) : r);
        table.rows.push_back(std::move(row));
      }
      table.render(os);
    }
  }
}

// ---------------------------------------------------------------------------
// Subcommand implementations
// ---------------------------------------------------------------------------

struct Loaded {
  Game game;
  std::vector<RiskMeasureSpec> specs;
};

StrategyProfile need_profile(const Game& game, const RunConfig& cfg) {
  if (cfg.profile.empty())
    throw InputError("this command needs a pure profile (--profile)");
  return StrategyProfile::pure(game, parse_profile_label(game, cfg.profile));
}

RunResult finish(const RunConfig& cfg, int exit_code, const Json& json_out,
                 const std::string& md_out) {
  RunResult res;
  res.exit_code = exit_code;
  res.output = cfg.format == "md" ? md_out : json_out.dump(2) + "\n";
  return res;
}

RunResult cmd_eval(const Loaded& in, const RunConfig& cfg) {
  StrategyProfile prof = need_profile(in.game, cfg);
  Json out;
  out["command"] = "eval";
  out["profile"] = cfg.profile;
  Json players = Json::array();
  std::ostringstream md;
  md << "ex ante risks for " << cfg.profile << "\n\n";
  MdTable table;
  table.headers = {"player", "measure", "risk"};
  for (Index i = 0; i < in.game.num_players(); ++i) {
    double risk = evaluate(in.specs[i], average_loss(in.game, prof, i));
    Json p;
    p["player"] = in.game.players[i];
    p["measure"] = in.specs[i].describe();
    p["risk"] = risk;
    p["display"] = format_one_decimal(risk);
    players.push_back(std::move(p));
    table.rows.push_back({in.game.players[i], in.specs[i].describe(),
                          format_one_decimal(risk)});
  }
  out["players"] = std::move(players);
  table.render(md);
  return finish(cfg, 0, out, md.str());
}

RunResult cmd_dual(const Loaded& in, const RunConfig& cfg) {
  StrategyProfile prof = need_profile(in.game, cfg);
  std::vector<std::optional<DualDensity>> overrides;
  if (!cfg.dual_override_path.empty())
    overrides = load_dual_overrides(cfg.dual_override_path, in.game);
  Json out;
  out["command"] = "dual";
  out["profile"] = cfg.profile;
  Json players = Json::array();
  std::ostringstream md;
  md << "optimal dual densities for " << cfg.profile << "\n\n";
  MdTable table;
  table.headers = {"player", "measure", "risk", "dual density", "source"};
  for (Index i = 0; i < in.game.num_players(); ++i) {
    RandomLoss loss = average_loss(in.game, prof, i);
    bool overridden = i < overrides.size() && overrides[i].has_value();
    DualDensity dual;
    if (overridden) {
      dual = *overrides[i];
      if (dual.values.size() != loss.size())
        throw InputError("dual override for player " + in.game.players[i] +
                         " has wrong length");
      if (!is_dual_feasible(in.specs[i], loss.probs, dual))
        throw InputError("dual override for player " + in.game.players[i] +
                         " is not in the dual set of " +
                         in.specs[i].describe());
      if (!is_dual_optimal(in.specs[i], loss, dual))
        throw InputError("dual override for player " + in.game.players[i] +
                         " is feasible but not optimal");
    } else {
      dual = optimal_dual(in.specs[i], loss);
    }
    double risk = evaluate(in.specs[i], loss);
    double attained = 0;
    for (Index t = 0; t < loss.size(); ++t)
      attained += loss.probs[t] * dual.values[t] * loss.values[t];
    Json p;
    p["player"] = in.game.players[i];
    p["measure"] = in.specs[i].describe();
    p["risk"] = risk;
    p["dual"] = dual.values;
    p["attained"] = attained;
    p["source"] = overridden ? "override" : "canonical";
    players.push_back(std::move(p));
    std::string cells;
    for (Index t = 0; t < dual.values.size(); ++t)
      cells += (t ? ", " : "") + rational_text(dual.values[t]);
    table.rows.push_back({in.game.players[i], in.specs[i].describe(),
                          format_one_decimal(risk), cells,
                          overridden ? "override" : "canonical"});
  }
  out["players"] = std::move(players);
  table.render(md);
  return finish(cfg, 0, out, md.str());
}

RunResult cmd_revise(const Loaded& in, const RunConfig& cfg) {
  std::string source = cfg.revision_from.empty() ? cfg.profile : cfg.revision_from;
  if (source.empty())
    throw InputError(
        "revise needs the inducing profile (--revision-from or --profile)");
  StrategyProfile inducing =
      StrategyProfile::pure(in.game, parse_profile_label(in.game, source));
  std::vector<std::optional<DualDensity>> overrides;
  if (!cfg.dual_override_path.empty())
    overrides = load_dual_overrides(cfg.dual_override_path, in.game);
  RevisionProfile rev = build_revision(in.game, in.specs, inducing, overrides);
  Json out;
  out["command"] = "revise";
  out["inducing_profile"] = source;
  out["players"] = revision_json(in.game, rev);
  std::ostringstream md;
  md << "interim revisions induced by " << source << "\n\n";
  MdTable table;
  table.headers = {"player", "type", "weight", "interim measure"};
  for (Index i = 0; i < in.game.num_players(); ++i)
    for (Index ti = 0; ti < in.game.types[i].size(); ++ti)
      table.rows.push_back({in.game.players[i], type_label(in.game, i, ti),
                            rational_text(rev.conditionals[i].weights[ti]),
                            interim_measure_text(rev.interim[i][ti])});
  table.render(md);
  return finish(cfg, 0, out, md.str());
}

RunResult cmd_solve_rane(const Loaded& in, const RunConfig& cfg) {
  const Game& game = in.game;
  std::vector<PureProfileRecord> records =
      solve_rane_pure(game, in.specs, cfg.tol);
  std::vector<std::string> full, pure_only;
  for (const auto& r : records) {
    if (r.certificate.equilibrium) full.push_back(r.label);
    if (r.pure_equilibrium) pure_only.push_back(r.label);
  }

  Json out;
  out["command"] = "solve-rane";
  out["profiles"] = records.size();
  out["equilibria"] = full;
  out["equilibria_pure_deviations"] = pure_only;
  Json recs = Json::array();
  for (const auto& r : records) {
    Json j;
    j["profile"] = r.label;
    j["risks"] = r.risks;
    j["equilibrium"] = r.certificate.equilibrium;
    j["equilibrium_pure_deviations"] = r.pure_equilibrium;
    recs.push_back(std::move(j));
  }
  out["records"] = std::move(recs);

  std::ostringstream md;
  md << "ex ante risks (best responses underlined)\n\n";
  if (game.num_players() == 2) {
    std::map<std::string, const PureProfileRecord*> by_label;
    for (const auto& r : records) by_label[r.label] = &r;
    auto rows = pure_strategies_of(game, 0);
    auto cols = pure_strategies_of(game, 1);
    // Pure best responses per row and per column.
    auto risk_at = [&](const std::vector<Index>& r,
                       const std::vector<Index>& c, Index player) {
      return by_label.at(profile_label(game, {r, c}))->risks[player];
    };
    MdTable table;
    table.headers.push_back(" ");
    for (const auto& c : cols)
      table.headers.push_back(strategy_label(game, 1, c));
    for (const auto& r : rows) {
      std::vector<std::string> row{strategy_label(game, 0, r)};
      for (const auto& c : cols) {
        double v1 = risk_at(r, c, 0), v2 = risk_at(r, c, 1);
        double best1 = v1, best2 = v2;
        for (const auto& r2 : rows) best1 = std::min(best1, risk_at(r2, c, 0));
        for (const auto& c2 : cols) best2 = std::min(best2, risk_at(r, c2, 1));
        std::string s1 = format_one_decimal(v1), s2 = format_one_decimal(v2);
        if (v1 <= best1 + cfg.tol) s1 = underline(s1);
        if (v2 <= best2 + cfg.tol) s2 = underline(s2);
        row.push_back(s1 + ", " + s2);
      }
      table.rows.push_back(std::move(row));
    }
    table.render(md);
  } else {
    MdTable table;
    table.headers = {"profile", "risks", "stable"};
    for (const auto& r : records) {
      std::string risks;
      for (Index i = 0; i < r.risks.size(); ++i)
        risks += (i ? ", " : "") + format_one_decimal(r.risks[i]);
      table.rows.push_back({r.label, risks,
                            r.certificate.equilibrium ? "yes" : "no"});
    }
    table.render(md);
  }
  md << "\nstable profiles (all deviations): ";
  for (std::size_t k = 0; k < full.size(); ++k)
    md << (k ? ", " : "") << full[k];
  if (full.empty()) md << "none";
  md << "\n\nstable against pure deviations: ";
  for (std::size_t k = 0; k < pure_only.size(); ++k)
    md << (k ? ", " : "") << pure_only[k];
  if (pure_only.empty()) md << "none";
  md << "\n";
  return finish(cfg, full.empty() ? 1 : 0, out, md.str());
}

RunResult cmd_check_rabne(const Loaded& in, const RunConfig& cfg) {
  StrategyProfile prof = need_profile(in.game, cfg);
  EquilibriumCertificate cert =
      check_rabne(in.game, in.specs, prof, cfg.tol);
  Json out;
  out["command"] = "check-rabne";
  out["profile"] = cfg.profile;
  out["certificate"] = certificate_json(in.game, cert);
  std::ostringstream md;
  md << "interim risks without revision for " << cfg.profile << "\n";
  std::vector<InformationPartition> parts;
  for (Index i = 0; i < in.game.num_players(); ++i)
    parts.push_back(InformationPartition::of_player(in.game, i));
  interim_tables_md(
      md, in.game, prof,
      [&](Index i, Index ti, const RandomLoss& loss) {
        return interim_unrevised(in.specs[i], loss, parts[i], ti);
      },
      [&](Index i, Index) { return in.specs[i].describe(); });
  md << "\nequilibrium: " << (cert.equilibrium ? "yes" : "no") << "\n";
  return finish(cfg, cert.equilibrium ? 0 : 1, out, md.str());
}

RunResult cmd_check_rrbne(const Loaded& in, const RunConfig& cfg) {
  StrategyProfile prof = need_profile(in.game, cfg);
  std::string source =
      cfg.revision_from.empty() ? cfg.profile : cfg.revision_from;
  StrategyProfile inducing =
      StrategyProfile::pure(in.game, parse_profile_label(in.game, source));
  std::vector<std::optional<DualDensity>> overrides;
  if (!cfg.dual_override_path.empty())
    overrides = load_dual_overrides(cfg.dual_override_path, in.game);
  RevisionProfile rev = build_revision(in.game, in.specs, inducing, overrides);
  EquilibriumCertificate cert = check_rrbne(in.game, rev, prof, cfg.tol);
  Json out;
  out["command"] = "check-rrbne";
  out["profile"] = cfg.profile;
  out["revision_from"] = source;
  out["revision"] = revision_json(in.game, rev);
  out["certificate"] = certificate_json(in.game, cert);
  std::ostringstream md;
  md << "interim risks under the revision induced by " << source << " for "
     << cfg.profile << "\n";
  std::vector<InformationPartition> parts;
  for (Index i = 0; i < in.game.num_players(); ++i)
    parts.push_back(InformationPartition::of_player(in.game, i));
  interim_tables_md(
      md, in.game, prof,
      [&](Index i, Index ti, const RandomLoss& loss) {
        return conditional_evaluate(in.specs[i], rev.conditionals[i], loss,
                                    parts[i], ti);
      },
      [&](Index i, Index ti) {
        return interim_measure_text(rev.interim[i][ti]);
      });
  md << "\nequilibrium: " << (cert.equilibrium ? "yes" : "no") << "\n";
  return finish(cfg, cert.equilibrium ? 0 : 1, out, md.str());
}

RunResult cmd_verify(const Loaded& in, const RunConfig& cfg) {
  const Game& game = in.game;
  std::vector<std::pair<std::string, StrategyProfile>> targets;
  if (!cfg.profile.empty()) {
    targets.push_back({cfg.profile, need_profile(game, cfg)});
  } else {
    Index count = 1;
    for (Index i = 0; i < game.num_players(); ++i) {
      Index per = 1;
      for (Index t = 0; t < game.types[i].size(); ++t) {
        per *= game.actions[i].size();
        if (per > 4096) break;
      }
      count *= per;
      if (count > 4096)
        throw InputError(
            "too many pure profiles to sweep; pass --profile to pick one");
    }
    for (const auto& rec : solve_rane_pure(game, in.specs, cfg.tol))
      targets.push_back({rec.label, StrategyProfile::pure(game, rec.actions)});
  }

  bool decomposition_pass = true;
  double worst_gap = 0;
  int interim_applicable = 0, interim_confirmed = 0;
  bool interim_ok = true;
  int converse_applicable = 0, converse_confirmed = 0;
  bool converse_ok = true;
  int dominance_checked = 0, dominance_premise = 0;
  bool dominance_ok = true;

  Json profiles = Json::array();
  for (const auto& [label, prof] : targets) {
    Json entry;
    entry["profile"] = label;

    Json decost = Json::array();
    for (Index i = 0; i < game.num_players(); ++i) {
      DecompositionReport d = verify_decomposition(
          in.specs[i], average_loss(game, prof, i),
          InformationPartition::of_player(game, i), 200, cfg.seed);
      decomposition_pass = decomposition_pass && d.pass;
      worst_gap = std::max(worst_gap, std::abs(d.gap));
      Json dj;
      dj["player"] = game.players[i];
      dj["ex_ante"] = d.ex_ante;
      dj["attained"] = d.attained;
      dj["max_sampled"] = d.max_sampled;
      dj["gap"] = d.gap;
      dj["pass"] = d.pass;
      decost.push_back(std::move(dj));
    }
    entry["decomposition"] = std::move(decost);

    ImplicationReport fwd =
        verify_rrbne_implies_rane(game, in.specs, prof, cfg.tol);
    if (fwd.applicable) {
      ++interim_applicable;
      if (fwd.consequent.equilibrium) ++interim_confirmed;
    }
    interim_ok = interim_ok && fwd.implication_ok;
    entry["interim_stability_implies_ex_ante"] = Json{
        {"applicable", fwd.applicable}, {"ok", fwd.implication_ok}};

    ImplicationReport bwd = verify_rane_implies_rrbne(
        game, in.specs, prof, cfg.tol, 20, 20, cfg.seed);
    if (bwd.premises_hold && bwd.applicable) {
      ++converse_applicable;
      if (bwd.consequent.equilibrium) ++converse_confirmed;
    }
    converse_ok = converse_ok && bwd.implication_ok;
    entry["ex_ante_implies_interim_stability"] =
        Json{{"premises_hold", bwd.premises_hold},
             {"applicable", bwd.applicable},
             {"ok", bwd.implication_ok},
             {"notes", bwd.premise_notes}};
    profiles.push_back(std::move(entry));
  }

  // Dominance transfer between weighted averages on sampled pure pairs.
  {
    Rng rng(cfg.seed + 101);
    auto random_pure = [&](void) {
      std::vector<std::vector<Index>> actions;
      for (Index i = 0; i < game.num_players(); ++i) {
        std::vector<Index> per;
        for (Index t = 0; t < game.types[i].size(); ++t)
          per.push_back(rng.below(game.actions[i].size()));
        actions.push_back(std::move(per));
      }
      return StrategyProfile::pure(game, actions);
    };
    for (int k = 0; k < 20; ++k) {
      StrategyProfile a = random_pure();
      StrategyProfile b = random_pure();
      for (Index i = 0; i < game.num_players(); ++i) {
        DominanceReport d =
            check_weighted_average_dominance(game, in.specs, i, a, b, cfg.tol);
        ++dominance_checked;
        if (d.premise) ++dominance_premise;
        dominance_ok = dominance_ok && d.pass;
      }
    }
  }

  // Revision-preference consistency, reported but not gating: the property
  // is a premise of the converse implication, not a claim about every game.
  Json rprc = Json::array();
  for (Index i = 0; i < game.num_players(); ++i) {
    RprcReport rep = check_rprc_sampled(game, in.specs, i, 20, cfg.seed + i,
                                        RprcMode::WeakDominance, cfg.tol);
    Json j;
    j["player"] = game.players[i];
    j["checked"] = rep.checked;
    j["applicable"] = rep.applicable;
    j["violations"] = rep.violations;
    rprc.push_back(std::move(j));
  }

  bool pass = decomposition_pass && interim_ok && converse_ok && dominance_ok;
  Json out;
  out["command"] = "verify";
  out["profiles_checked"] = targets.size();
  out["decomposition"] =
      Json{{"pass", decomposition_pass}, {"worst_gap", worst_gap}};
  out["interim_stability_implies_ex_ante"] =
      Json{{"applicable", interim_applicable},
           {"confirmed", interim_confirmed},
           {"pass", interim_ok}};
  out["ex_ante_implies_interim_stability"] =
      Json{{"applicable", converse_applicable},
           {"confirmed", converse_confirmed},
           {"pass", converse_ok}};
  out["weighted_average_dominance"] = Json{{"checked", dominance_checked},
                                           {"premise_held", dominance_premise},
                                           {"pass", dominance_ok}};
  out["revision_consistency"] = std::move(rprc);
  out["profiles"] = std::move(profiles);
  out["pass"] = pass;

  std::ostringstream md;
  md << "verification over " << targets.size() << " profile(s)\n\n";
  MdTable table;
  table.headers = {"check", "result"};
  table.rows.push_back(
      {"interim decomposition of the ex ante risk",
       decomposition_pass ? "pass" : "FAIL"});
  table.rows.push_back({"interim stability (own revision) implies ex ante "
                        "stability",
                        interim_ok ? "pass" : "FAIL"});
  table.rows.push_back({"ex ante stability implies interim stability (own "
                        "revision, premises sampled)",
                        converse_ok ? "pass" : "FAIL"});
  table.rows.push_back({"dominance transfer between weighted interim "
                        "averages",
                        dominance_ok ? "pass" : "FAIL"});
  table.render(md);
  md << "\noverall: " << (pass ? "pass" : "FAIL") << "\n";
  return finish(cfg, pass ? 0 : 1, out, md.str());
}

RunResult cmd_beliefs(const Loaded& in, const RunConfig& cfg) {
  const Game& game = in.game;
  BeliefSystem beliefs = beliefs_from_prior(game);
  ConsistencyReport cons = check_belief_consistency(beliefs);

  Json out;
  out["command"] = "beliefs";
  Json bj = Json::array();
  for (Index i = 0; i < game.num_players(); ++i)
    for (Index ti = 0; ti < game.types[i].size(); ++ti) {
      Json row;
      row["player"] = game.players[i];
      row["type"] = type_label(game, i, ti);
      row["belief"] = beliefs.beliefs[i][ti];
      bj.push_back(std::move(row));
    }
  out["beliefs"] = std::move(bj);
  out["consistent"] = cons.consistent;
  if (cons.consistent) {
    out["witness_prior"] = cons.prior;
    out["min_live_margin"] = cons.min_live_margin;
  }

  std::ostringstream md;
  md << "interim beliefs derived from the prior\n\n";
  MdTable btab;
  btab.headers = {"player", "type", "belief over opponent types"};
  for (Index i = 0; i < game.num_players(); ++i)
    for (Index ti = 0; ti < game.types[i].size(); ++ti) {
      std::string cells;
      for (Index k = 0; k < beliefs.beliefs[i][ti].size(); ++k)
        cells += (k ? ", " : "") + rational_text(beliefs.beliefs[i][ti][k]);
      btab.rows.push_back({game.players[i], type_label(game, i, ti), cells});
    }
  btab.render(md);
  md << "\nconsistent with a common prior: "
     << (cons.consistent ? "yes" : "no") << "\n";

  bool commonization_pass = true;
  if (!cfg.profile.empty()) {
    StrategyProfile prof = need_profile(game, cfg);
    CommonizationReport com = commonize(game, beliefs, prof);
    commonization_pass = com.pass;
    Json cj = Json::array();
    for (const auto& t : com.types) {
      Json row;
      row["player"] = game.players[t.player];
      row["type"] = type_label(game, t.player, t.own_type);
      row["belief"] = t.belief;
      row["interim_loss"] = t.interim_loss;
      row["singleton"] = t.singleton;
      row["attained"] = t.attained;
      row["attainment_ok"] = t.attainment_ok;
      row["support_ok"] = t.support_ok;
      cj.push_back(std::move(row));
    }
    out["commonization"] = Json{{"prior", com.prior},
                                {"types", std::move(cj)},
                                {"pass", com.pass}};
    md << "\nbelief-set commonization under " << cfg.profile << "\n\n";
    MdTable ctab;
    ctab.headers = {"player", "type", "belief set", "worst-case value",
                    "checks"};
    for (const auto& t : com.types) {
      std::string shape = t.singleton ? "singleton" : "segment";
      std::string checks =
          std::string(t.attainment_ok ? "attained" : "NOT attained") +
          ", support " + (t.support_ok ? "ok" : "BAD");
      ctab.rows.push_back({game.players[t.player],
                           type_label(game, t.player, t.own_type), shape,
                           format_one_decimal(t.attained), checks});
    }
    ctab.render(md);
    md << "\ncommonization: " << (com.pass ? "pass" : "FAIL") << "\n";
  }

  bool pass = cons.consistent && commonization_pass;
  return finish(cfg, pass ? 0 : 1, out, md.str());
}

}  // namespace

// ---------------------------------------------------------------------------
// Game files
// ---------------------------------------------------------------------------

Game parse_game(const std::string& text, const std::string& origin) {
  Json doc = parse_json(text, origin);
  std::vector<std::string> players = string_array(
      need_key(doc, "players", text, origin), "players", text, origin,
      "players");

  auto per_player_strings = [&](const char* key) {
    const Json& obj = need_key(doc, key, text, origin);
    if (!obj.is_object())
      fail(origin, line_of_key(text, key),
           std::string(key) + " must be an object keyed by player");
    std::vector<std::vector<std::string>> out;
    for (const auto& p : players) {
      if (!obj.contains(p))
        fail(origin, line_of_key(text, key),
             std::string(key) + " is missing player \"" + p + "\"");
      out.push_back(string_array(obj.at(p),
                                 std::string(key) + " of player " + p, text,
                                 origin, key));
    }
    return out;
  };
  std::vector<std::vector<std::string>> types = per_player_strings("types");
  std::vector<std::vector<std::string>> actions = per_player_strings("actions");

  Index num_type_profiles = 1, num_action_profiles = 1;
  for (const auto& t : types) num_type_profiles *= t.size();
  for (const auto& a : actions) num_action_profiles *= a.size();

  std::vector<double> prior =
      number_array(need_key(doc, "prior", text, origin), "prior", text, origin,
                   "prior");
  if (prior.size() != num_type_profiles)
    fail(origin, line_of_key(text, "prior"),
         "prior has " + std::to_string(prior.size()) + " entries, expected " +
             std::to_string(num_type_profiles) + " (one per type profile)");
  double total = std::accumulate(prior.begin(), prior.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-9)
    fail(origin, line_of_key(text, "prior"),
         "prior not normalized (sums to " + std::to_string(total) + ")");

  const Json& lobj = need_key(doc, "losses", text, origin);
  if (!lobj.is_object())
    fail(origin, line_of_key(text, "losses"),
         "losses must be an object keyed by player");
  std::vector<std::vector<double>> losses;
  for (const auto& p : players) {
    if (!lobj.contains(p))
      fail(origin, line_of_key(text, "losses"),
           "losses is missing player \"" + p + "\"");
    std::vector<double> table =
        number_array(lobj.at(p), "losses of player " + p, text, origin,
                     "losses");
    if (table.size() != num_type_profiles * num_action_profiles) {
      Index flat = table.size();
      std::ostringstream msg;
      msg << "losses of player " << p << " has " << table.size()
          << " entries, expected "
          << num_type_profiles * num_action_profiles << " ("
          << num_type_profiles << " type profiles x " << num_action_profiles
          << " action profiles)";
      if (table.size() < num_type_profiles * num_action_profiles)
        msg << "; first missing entry is (type profile "
            << flat / num_action_profiles << ", action profile "
            << flat % num_action_profiles << ")";
      fail(origin, line_of_key(text, "losses"), msg.str());
    }
    losses.push_back(std::move(table));
  }

  try {
    return Game::make(std::move(players), std::move(types), std::move(actions),
                      std::move(prior), std::move(losses));
  } catch (const InputError& e) {
    fail(origin, 0, e.what());
  }
}

Game load_game(const std::string& path) {
  return parse_game(read_file(path), path);
}

std::string serialize_game(const Game& game) {
  Json doc;
  doc["players"] = game.players;
  Json types = Json::object(), actions = Json::object(),
       losses = Json::object();
  for (Index i = 0; i < game.num_players(); ++i) {
    types[game.players[i]] = game.types[i];
    actions[game.players[i]] = game.actions[i];
    losses[game.players[i]] = game.losses[i];
  }
  doc["types"] = std::move(types);
  doc["actions"] = std::move(actions);
  doc["prior"] = game.prior;
  doc["losses"] = std::move(losses);
  return doc.dump(2) + "\n";
}

void save_game(const Game& game, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write file: " + path);
  out << serialize_game(game);
}

// ---------------------------------------------------------------------------
// Spec files
// ---------------------------------------------------------------------------

namespace {

RiskMeasureSpec spec_from_json(const Json& j, const std::string& text,
                               const std::string& origin) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    fail(origin, line_of_key(text, "kind"),
         "a risk measure needs a string \"kind\"");
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "expectation") return RiskMeasureSpec::expectation();
  if (kind == "esssup") return RiskMeasureSpec::esssup();
  if (kind == "avar") {
    if (!j.contains("alpha"))
      fail(origin, line_of_key(text, "kind"), "avar needs \"alpha\"");
    const Json& a = j.at("alpha");
    if (a.is_number()) return RiskMeasureSpec::avar(a.get<double>());
    if (a.is_object() && a.contains("num") && a.contains("den") &&
        a.at("num").is_number_integer() && a.at("den").is_number_integer())
      return RiskMeasureSpec::avar_rational(a.at("num").get<std::int64_t>(),
                                            a.at("den").get<std::int64_t>());
    fail(origin, line_of_key(text, "alpha"),
         "alpha must be a number or {\"num\":..,\"den\":..}");
  }
  if (kind == "spectral") {
    if (!j.contains("components") || !j.at("components").is_array())
      fail(origin, line_of_key(text, "kind"),
           "spectral needs \"components\": [[weight, level], ...]");
    std::vector<std::pair<double, double>> parts;
    for (const auto& c : j.at("components")) {
      if (!c.is_array() || c.size() != 2 || !c[0].is_number() ||
          !c[1].is_number())
        fail(origin, line_of_key(text, "components"),
             "each spectral component must be a [weight, level] pair");
      parts.push_back({c[0].get<double>(), c[1].get<double>()});
    }
    return RiskMeasureSpec::spectral(std::move(parts));
  }
  if (kind == "polytope") {
    if (!j.contains("vertices") || !j.at("vertices").is_array())
      fail(origin, line_of_key(text, "kind"),
           "polytope needs \"vertices\": [[...], ...]");
    std::vector<std::vector<double>> verts;
    for (const auto& v : j.at("vertices"))
      verts.push_back(
          number_array(v, "polytope vertex", text, origin, "vertices"));
    return RiskMeasureSpec::polytope(std::move(verts));
  }
  fail(origin, line_of_key(text, "kind"),
       "unknown risk measure kind \"" + kind +
           "\" (expected expectation, avar, esssup, spectral, or polytope)");
}

}  // namespace

std::vector<RiskMeasureSpec> parse_specs(const std::string& text,
                                         const std::vector<std::string>& players,
                                         const std::string& origin) {
  Json doc = parse_json(text, origin);
  std::vector<RiskMeasureSpec> out;
  try {
    if (doc.is_object() && doc.contains("kind")) {
      RiskMeasureSpec one = spec_from_json(doc, text, origin);
      out.assign(players.size(), one);
      return out;
    }
    if (doc.is_array()) {
      if (doc.size() != players.size())
        fail(origin, 1,
             "spec array has " + std::to_string(doc.size()) +
                 " entries, expected one per player (" +
                 std::to_string(players.size()) + ")");
      for (const auto& j : doc) out.push_back(spec_from_json(j, text, origin));
      return out;
    }
    if (doc.is_object()) {
      for (const auto& p : players) {
        if (!doc.contains(p))
          fail(origin, 1, "spec object is missing player \"" + p + "\"");
        out.push_back(spec_from_json(doc.at(p), text, origin));
      }
      return out;
    }
  } catch (const InputError&) {
    throw;
  }
  fail(origin, 1,
       "expected a spec object, an array of specs, or an object keyed by "
       "player");
}

std::vector<RiskMeasureSpec> load_specs(const std::string& path,
                                        const std::vector<std::string>& players) {
  return parse_specs(read_file(path), players, path);
}

std::string serialize_specs(const std::vector<RiskMeasureSpec>& specs) {
  Json arr = Json::array();
  for (const auto& s : specs) {
    Json j;
    switch (s.kind) {
      case RiskKind::Expectation:
        j["kind"] = "expectation";
        break;
      case RiskKind::EssentialSup:
        j["kind"] = "esssup";
        break;
      case RiskKind::AVaR:
        j["kind"] = "avar";
        if (s.rational_level())
          j["alpha"] = Json{{"num", s.alpha_num}, {"den", s.alpha_den}};
        else
          j["alpha"] = s.alpha;
        break;
      case RiskKind::SpectralMixture: {
        j["kind"] = "spectral";
        Json parts = Json::array();
        for (auto [w, a] : s.components) parts.push_back(Json::array({w, a}));
        j["components"] = std::move(parts);
        break;
      }
      case RiskKind::PolytopeDual:
        j["kind"] = "polytope";
        j["vertices"] = s.vertices;
        break;
    }
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Dual override files
// ---------------------------------------------------------------------------

std::vector<std::optional<DualDensity>> parse_dual_overrides(
    const std::string& text, const Game& game, const std::string& origin) {
  Json doc = parse_json(text, origin);
  std::vector<std::optional<DualDensity>> out(game.num_players());
  auto assign = [&](Index i, const Json& j) {
    if (j.is_null()) return;
    std::vector<double> values = number_array(
        j, "dual override for player " + game.players[i], text, origin, "");
    if (values.size() != game.num_type_profiles())
      fail(origin, 0,
           "dual override for player " + game.players[i] + " has " +
               std::to_string(values.size()) + " entries, expected " +
               std::to_string(game.num_type_profiles()));
    out[i] = DualDensity{std::move(values)};
  };
  if (doc.is_array()) {
    if (doc.size() != game.num_players())
      fail(origin, 1,
           "dual override array has " + std::to_string(doc.size()) +
               " entries, expected one per player");
    for (Index i = 0; i < game.num_players(); ++i) assign(i, doc[i]);
    return out;
  }
  if (doc.is_object()) {
    for (const auto& [key, value] : doc.items()) {
      auto it = std::find(game.players.begin(), game.players.end(), key);
      if (it == game.players.end())
        fail(origin, 1, "dual override names unknown player \"" + key + "\"");
      assign(static_cast<Index>(it - game.players.begin()), value);
    }
    return out;
  }
  fail(origin, 1,
       "expected an array of per-player duals or an object keyed by player");
}

std::vector<std::optional<DualDensity>> load_dual_overrides(
    const std::string& path, const Game& game) {
  return parse_dual_overrides(read_file(path), game, path);
}

// ---------------------------------------------------------------------------
// Display helpers
// ---------------------------------------------------------------------------

std::string format_one_decimal(double v) {
  double x = v * 10.0;
  double r = std::floor(x);
  if (x - r > 0.5 + 1e-9) r += 1.0;
  long long n = std::llround(r);
  long long whole = n / 10;
  long long tenth = std::llabs(n % 10);
  std::ostringstream os;
  if (n < 0 && whole == 0) os << "-";
  os << whole;
  if (tenth != 0) os << "." << tenth;
  return os.str();
}

std::string default_data_dir() {
  if (const char* env = std::getenv("RISKGAME_DATA_DIR"); env && *env)
    return env;
#ifdef RISKGAME_DATA_DIR
  return RISKGAME_DATA_DIR;
#else
  return "data";
#endif
}

// ---------------------------------------------------------------------------
// Command dispatch
// ---------------------------------------------------------------------------

RunResult run(const RunConfig& cfg) {
  if (!(cfg.tol > 0)) throw InputError("tolerance must be positive");
  if (cfg.format != "json" && cfg.format != "md")
    throw InputError("unknown format \"" + cfg.format +
                     "\" (expected json or md)");
  if (cfg.game_path.empty())
    throw InputError("a game file is required (--game)");

  Loaded in{load_game(cfg.game_path), {}};
  in.specs = cfg.specs_path.empty()
                 ? std::vector<RiskMeasureSpec>(
                       in.game.num_players(),
                       RiskMeasureSpec::avar_rational(1, 3))
                 : load_specs(cfg.specs_path, in.game.players);

  if (cfg.command == "eval") return cmd_eval(in, cfg);
  if (cfg.command == "dual") return cmd_dual(in, cfg);
  if (cfg.command == "revise") return cmd_revise(in, cfg);
  if (cfg.command == "solve-rane") return cmd_solve_rane(in, cfg);
  if (cfg.command == "check-rabne") return cmd_check_rabne(in, cfg);
  if (cfg.command == "check-rrbne") return cmd_check_rrbne(in, cfg);
  if (cfg.command == "verify") return cmd_verify(in, cfg);
  if (cfg.command == "beliefs") return cmd_beliefs(in, cfg);
  throw InputError("unknown command \"" + cfg.command + "\"");
}

}  // namespace riskgame
