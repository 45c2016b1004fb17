#pragma once

#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "selgame/core.hpp"
#include "selgame/reflection.hpp"
#include "selgame/solver.hpp"
#include "selgame/spaces.hpp"
#include "selgame/strategies.hpp"
#include "selgame/translate.hpp"

namespace selgame::io {

using json = nlohmann::ordered_json;

// ------------------------------------------------------------ parse helpers

inline json parse_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Report line/column rather than a raw byte offset.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
  }
}

inline json read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ParseError(path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str(), path);
}

inline const json& field(const json& j, const char* key, const std::string& path) {
  if (!j.is_object())
    throw ParseError(path + ": expected an object");
  auto it = j.find(key);
  if (it == j.end())
    throw ParseError(path + "." + key + ": missing field");
  return *it;
}

inline std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string())
    throw ParseError(path + ": expected a string");
  return j.get<std::string>();
}

inline std::size_t as_index(const json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    throw ParseError(path + ": expected a non-negative integer");
  return j.get<std::size_t>();
}

inline bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean())
    throw ParseError(path + ": expected a boolean");
  return j.get<bool>();
}

inline const json& as_array(const json& j, const std::string& path) {
  if (!j.is_array())
    throw ParseError(path + ": expected an array");
  return j;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  if (s.empty())
    return out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline std::size_t parse_index_text(const std::string& s, const std::string& path) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError(path + ": expected an index, got '" + s + "'");
  return static_cast<std::size_t>(std::stoull(s));
}

// ------------------------------------------------------------ atoms & sets

inline json to_json(const Universe& u) { return json(u.ids()); }

inline Universe universe_from_json(const json& j, const std::string& path) {
  std::vector<Atom> atoms;
  std::size_t i = 0;
  for (const auto& a : as_array(j, path)) {
    const auto p = path + "[" + std::to_string(i++) + "]";
    if (a.is_object())
      atoms.push_back(Atom{as_string(field(a, "id", p), p + ".id"),
                           a.contains("meaning") ? as_string(a["meaning"], p + ".meaning") : ""});
    else
      atoms.push_back(Atom{as_string(a, p), ""});
  }
  try {
    return Universe(std::move(atoms));
  } catch (const DomainError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline json to_json(const Universe& u, AtomSet s) {
  json out = json::array();
  for (auto i : s.indices())
    out.push_back(i < u.size() ? u[i].id : "#" + std::to_string(i));
  return out;
}

/// Reads atom-id arrays against a universe. Unknown ids are given indices
/// past the universe so that validation can report them.
class AtomSetReader {
public:
  explicit AtomSetReader(const Universe& u) : u_(u) {}

  AtomSet read(const json& j, const std::string& path) {
    AtomSet s;
    std::size_t i = 0;
    for (const auto& a : as_array(j, path)) {
      const auto id = as_string(a, path + "[" + std::to_string(i++) + "]");
      s.insert(index(id, path));
    }
    return s;
  }

  AtomIndex index(const std::string& id, const std::string& path) {
    if (auto k = u_.index_of(id))
      return *k;
    for (std::size_t k = 0; k < extras_.size(); ++k)
      if (extras_[k] == id)
        return u_.size() + k;
    if (u_.size() + extras_.size() >= kMaxAtoms)
      throw ParseError(path + ": too many atoms outside the universe");
    extras_.push_back(id);
    return u_.size() + extras_.size() - 1;
  }

  /// Strict lookup for strategy tables: unknown atoms are parse errors.
  AtomIndex known(const std::string& id, const std::string& path) const {
    if (auto k = u_.index_of(id))
      return *k;
    throw ParseError(path + ": atom '" + id + "' is not in the universe");
  }

private:
  const Universe& u_;
  std::vector<std::string> extras_;
};

inline std::vector<AtomSet> sets_from_json(const json& j, AtomSetReader& reader, const std::string& path) {
  std::vector<AtomSet> out;
  std::size_t i = 0;
  for (const auto& m : as_array(j, path)) {
    out.push_back(reader.read(m, path + "[" + std::to_string(i++) + "]"));
  }
  return out;
}

inline json sets_to_json(const Universe& u, const std::vector<AtomSet>& sets) {
  json out = json::array();
  for (auto s : sets)
    out.push_back(to_json(u, s));
  return out;
}

inline json to_json(const Family& f) {
  json out;
  out["universe"] = to_json(f.universe);
  out["family"] = sets_to_json(f.universe, f.members);
  return out;
}

/// A family file is either {"universe":[..],"family":[[..],..]} or a bare
/// array of members read against `fallback`.
inline Family family_from_json(const json& j, const Universe* fallback, const std::string& path) {
  Family f;
  const json* members = &j;
  if (j.is_object()) {
    f.universe = j.contains("universe") ? universe_from_json(j["universe"], path + ".universe")
                 : fallback            ? *fallback
                                       : throw ParseError(path + ".universe: missing field");
    members = &field(j, "family", path);
  } else if (fallback) {
    f.universe = *fallback;
  } else {
    throw ParseError(path + ": a bare member list needs a universe");
  }
  AtomSetReader reader(f.universe);
  f.members = sets_from_json(*members, reader, j.is_object() ? path + ".family" : path);
  for (auto m : f.members)
    if (!m.subset_of(f.universe.full()))
      throw ParseError(path + ": atom outside universe in " + f.universe.describe(m - f.universe.full()));
  return f;
}

// ------------------------------------------------------------ spaces

inline json to_json(const FiniteSpace& sp) {
  json out;
  out["points"] = to_json(sp.points);
  out["subbase"] = sets_to_json(sp.points, sp.subbase);
  if (sp.basis_is_all)
    out["basis"] = "all";
  else
    out["basis"] = sets_to_json(sp.points, sp.basis);
  return out;
}

inline FiniteSpace space_from_json(const json& j, const std::string& path) {
  Universe points = universe_from_json(field(j, "points", path), path + ".points");
  AtomSetReader reader(points);
  auto subbase = j.contains("subbase") ? sets_from_json(j["subbase"], reader, path + ".subbase")
                                       : std::vector<AtomSet>{};
  for (auto s : subbase)
    if (!s.subset_of(points.full()))
      throw ParseError(path + ".subbase: point outside the space");
  FiniteSpace sp = topology_from_subbase(points, subbase);
  if (j.contains("basis") && !(j["basis"].is_string() && j["basis"] == "all")) {
    auto basis = sets_from_json(j["basis"], reader, path + ".basis");
    try {
      sp = with_basis(sp, basis);
    } catch (const DomainError& e) {
      throw ParseError(path + ".basis: " + e.what());
    }
  }
  return sp;
}

// ------------------------------------------------------------ payoffs & instances

inline json to_json(const PayoffPredicate& p, const Universe& u) {
  json out;
  out["kind"] = to_string(p.kind());
  if (p.kind() == PayoffKind::extensional) {
    out["sets"] = sets_to_json(u, p.sets());
  } else {
    out["space"] = to_json(*p.space());
    if (p.point())
      out["point"] = p.space()->points[*p.point()].id;
    if (p.omega_k())
      out["k"] = *p.omega_k();
  }
  out["negated"] = p.negated();
  return out;
}

inline PayoffPredicate payoff_from_json(const json& j, const Universe& u, AtomSetReader& reader,
                                        const std::string& path) {
  const auto kind_name = as_string(field(j, "kind", path), path + ".kind");
  auto kind = payoff_kind_from_string(kind_name);
  if (!kind)
    throw ParseError(path + ".kind: unknown payoff kind '" + kind_name + "'");
  const bool negated = j.contains("negated") ? as_bool(j["negated"], path + ".negated") : false;
  if (*kind == PayoffKind::extensional) {
    // Sets naming unknown atoms are kept; validate_instance reports them.
    auto sets = sets_from_json(field(j, "sets", path), reader, path + ".sets");
    return PayoffPredicate::extensional(u.size(), std::move(sets), negated);
  }
  auto space = std::make_shared<const FiniteSpace>(space_from_json(field(j, "space", path), path + ".space"));
  std::optional<AtomIndex> point;
  if (j.contains("point")) {
    const auto pid = as_string(j["point"], path + ".point");
    point = space->points.index_of(pid);
    if (!point)
      throw ParseError(path + ".point: unknown point '" + pid + "'");
  }
  std::optional<std::size_t> k;
  if (j.contains("k"))
    k = as_index(j["k"], path + ".k");
  try {
    return PayoffPredicate::topological(*kind, std::move(space), u, point, negated, k);
  } catch (const DomainError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline json to_json(const GameInstance& g) {
  json out;
  out["universe"] = to_json(g.universe());
  out["family"] = sets_to_json(g.universe(), g.family.members);
  out["payoff"] = to_json(g.payoff, g.universe());
  out["horizon"] = g.horizon;
  return out;
}

/// Parses an instance. Structural problems (unknown atoms, duplicates) are
/// left for validate_instance; only malformed JSON throws.
inline GameInstance instance_from_json(const json& j, const std::string& path = "$") {
  GameInstance g;
  g.family.universe = universe_from_json(field(j, "universe", path), path + ".universe");
  AtomSetReader reader(g.family.universe);
  g.family.members = sets_from_json(field(j, "family", path), reader, path + ".family");
  g.payoff = payoff_from_json(field(j, "payoff", path), g.family.universe, reader, path + ".payoff");
  const auto& h = field(j, "horizon", path);
  if (!h.is_number_integer())
    throw ParseError(path + ".horizon: expected an integer");
  const long long n = h.get<long long>();
  g.horizon = n < 0 ? 0 : static_cast<std::size_t>(n);
  return g;
}

// ------------------------------------------------------------ strategies

inline std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i)
      out += sep;
    out += parts[i];
  }
  return out;
}

inline json to_json(const Strategy& s, const GameInstance& g) {
  const auto& u = g.universe();
  json out;
  out["player"] = to_string(player_of(s));
  out["class"] = class_name(s);
  out["horizon"] = horizon_of(s);
  json table = json::object();
  if (const auto* p = std::get_if<PredeterminedStrategyI>(&s)) {
    table = json(p->moves);
  } else if (const auto* mk = std::get_if<MarkovStrategyII>(&s)) {
    for (MemberIndex m = 0; m < (mk->table.empty() ? 0 : mk->table[0].size()); ++m)
      for (std::size_t r = 0; r < mk->table.size(); ++r)
        table[std::to_string(m) + "," + std::to_string(r)] = u[mk->table[r][m]].id;
  } else if (const auto* fi = std::get_if<FullStrategyI>(&s)) {
    for (const auto& [h, m] : fi->table) {
      std::vector<std::string> ids;
      for (auto a : h)
        ids.push_back(u[a].id);
      table[join(ids, '/')] = m;
    }
  } else {
    for (const auto& [h, a] : std::get<FullStrategyII>(s).table) {
      std::vector<std::string> ids;
      for (auto m : h)
        ids.push_back(std::to_string(m));
      table[join(ids, '/')] = u[a].id;
    }
  }
  out["table"] = std::move(table);
  return out;
}

inline Strategy strategy_from_json(const json& j, const GameInstance& g, const std::string& path = "$") {
  const auto player = as_string(field(j, "player", path), path + ".player");
  const auto cls = as_string(field(j, "class", path), path + ".class");
  const auto horizon = as_index(field(j, "horizon", path), path + ".horizon");
  const auto& table = field(j, "table", path);
  const auto tpath = path + ".table";
  AtomSetReader reader(g.universe());
  if (player == "I" && cls == "predetermined") {
    PredeterminedStrategyI s;
    std::size_t i = 0;
    for (const auto& m : as_array(table, tpath))
      s.moves.push_back(as_index(m, tpath + "[" + std::to_string(i++) + "]"));
    if (s.moves.size() != horizon)
      throw ParseError(tpath + ": expected " + std::to_string(horizon) + " moves");
    return s;
  }
  if (!table.is_object())
    throw ParseError(tpath + ": expected an object");
  if (player == "II" && cls == "markov") {
    const std::size_t k = g.family.size();
    std::vector<std::vector<std::optional<AtomIndex>>> cells(horizon, std::vector<std::optional<AtomIndex>>(k));
    for (const auto& [key, val] : table.items()) {
      const auto kp = tpath + "[\"" + key + "\"]";
      auto parts = split(key, ',');
      if (parts.size() != 2)
        throw ParseError(kp + ": key must be \"member,round\"");
      auto m = parse_index_text(parts[0], kp), r = parse_index_text(parts[1], kp);
      if (m >= k || r >= horizon)
        throw ParseError(kp + ": member or round out of range");
      cells[r][m] = reader.known(as_string(val, kp), kp);
    }
    MarkovStrategyII s;
    for (std::size_t r = 0; r < horizon; ++r) {
      s.table.emplace_back();
      for (MemberIndex m = 0; m < k; ++m) {
        if (!cells[r][m])
          throw ParseError(tpath + ": missing cell \"" + std::to_string(m) + "," + std::to_string(r) + "\"");
        s.table.back().push_back(*cells[r][m]);
      }
    }
    return s;
  }
  if (player == "I" && cls == "full") {
    FullStrategyI s{horizon, {}};
    for (const auto& [key, val] : table.items()) {
      const auto kp = tpath + "[\"" + key + "\"]";
      std::vector<AtomIndex> h;
      for (const auto& id : split(key, '/'))
        h.push_back(reader.known(id, kp));
      s.table[h] = as_index(val, kp);
    }
    return s;
  }
  if (player == "II" && cls == "full") {
    FullStrategyII s{horizon, {}};
    for (const auto& [key, val] : table.items()) {
      const auto kp = tpath + "[\"" + key + "\"]";
      std::vector<MemberIndex> h;
      for (const auto& part : split(key, '/'))
        h.push_back(parse_index_text(part, kp));
      if (h.empty())
        throw ParseError(kp + ": full strategies for II key on nonempty histories");
      s.table[h] = reader.known(as_string(val, kp), kp);
    }
    return s;
  }
  throw ParseError(path + ": unsupported strategy class " + player + "/" + cls);
}

// ------------------------------------------------------------ reports

inline json to_json(const SolveReport& r, const GameInstance& g) {
  json out;
  out["relation"] = to_string(r.relation);
  out["holds"] = r.holds;
  out["witness"] = r.witness ? to_json(*r.witness, g) : json(nullptr);
  out["nodes"] = r.nodes;
  out["bound_hit"] = r.bound_hit;
  return out;
}

inline json to_json(const Verdicts& v) {
  json out;
  for (auto r : kAllRelations)
    out[to_string(r)] = v.get(r);
  return out;
}

inline json to_json(const ChainReport& c) {
  json out;
  out["verdicts"] = to_json(c.verdicts);
  out["consistent"] = c.consistent;
  out["violations"] = c.violations;
  out["nodes"] = c.nodes;
  return out;
}

inline json to_json(const ChoiceFunction& f, const Family& r) {
  json out = json::array();
  for (MemberIndex i = 0; i < r.size(); ++i)
    out.push_back({{"member", to_json(r.universe, r[i])}, {"choice", r.universe[f(i)].id}});
  return out;
}

inline json to_json(const ReflectionReport& rep, const Family& r, const Family& a) {
  json out;
  out["is_reflection"] = rep.holds();
  auto failed = rep.failed_condition();
  out["failed_condition"] = failed ? json(to_string(*failed)) : json(nullptr);
  json witness = nullptr;
  if (failed == ReflectionCondition::subset) {
    witness = json::object();
    witness["range"] = to_json(r.universe, rep.subset_witness->range());
    witness["choice_function"] = to_json(*rep.subset_witness, r);
  } else if (failed == ReflectionCondition::coinitial) {
    witness = json::object();
    witness["reflection_member"] = to_json(r.universe, r[rep.coinitial_witness->first]);
    witness["target_member"] = to_json(a.universe, a[rep.coinitial_witness->second]);
  }
  out["witness"] = std::move(witness);
  out["subset_ok"] = rep.subset_ok;
  out["coinitial_ok"] = rep.coinitial_ok;
  return out;
}

inline json to_json(const DualityReport& d, const Family& r, const Family& a) {
  json out;
  out["reflection"] = to_json(d.reflection, r, a);
  out["solved"] = d.solved;
  if (d.solved) {
    out["primal"] = to_json(d.primal);
    out["dual"] = to_json(d.dual);
    json eqs = json::array();
    for (const auto& e : d.equivalences)
      eqs.push_back({{"name", e.name()}, {"primal", e.primal}, {"dual", e.dual}, {"holds", e.holds()}});
    out["equivalences"] = std::move(eqs);
    out["nodes"] = d.nodes;
  }
  out["all_hold"] = d.all_hold();
  return out;
}

inline json to_json(const DualityContext& ctx) {
  json out;
  out["primal"] = to_json(ctx.primal);
  out["reflection"] = sets_to_json(ctx.reflection_family().universe, ctx.reflection_family().members);
  out["reflection_checked"] = ctx.reflection_checked;
  return out;
}

/// {"primal": <instance>, "reflection": [[..],..]}; the dual is derived.
inline DualityContext context_from_json(const json& j, bool require_reflection, std::uint64_t budget,
                                        const std::string& path = "$") {
  auto primal = instance_from_json(field(j, "primal", path), path + ".primal");
  auto rep = validate_instance(primal);
  if (!rep.ok())
    throw ParseError(path + ".primal: " + rep.violations.front());
  auto r = family_from_json(field(j, "reflection", path), &primal.universe(), path + ".reflection");
  return make_context(primal, r, require_reflection, budget);
}

inline json to_json(const Translation& t, Theorem th, Direction d, const DualityContext& ctx) {
  const GameInstance& target = target_game(ctx, d);
  json out;
  out["theorem"] = to_string(th);
  out["direction"] = to_string(d);
  out["strategy"] = to_json(t.strategy, target);
  json prov = json::array();
  for (const auto& step : t.provenance) {
    json e;
    e["role"] = step.role;
    e["key"] = step.key;
    e["value"] = step.value;
    if (step.off_path)
      e["off_path"] = true;
    prov.push_back(std::move(e));
  }
  out["provenance"] = std::move(prov);
  return out;
}

inline std::string dump(const json& j, bool pretty) { return pretty ? j.dump(2) : j.dump(); }

} // namespace selgame::io
