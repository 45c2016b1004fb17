#pragma once

#include <array>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "selgame/core.hpp"
#include "selgame/reflection.hpp"
#include "selgame/solver.hpp"
#include "selgame/strategies.hpp"

namespace selgame {

/// A primal game G1(A,B) paired with its dual G1(R,¬B).
struct DualityContext {
  GameInstance primal;
  GameInstance dual;
  /// True only when is_reflection(R, A) was run and held.
  bool reflection_checked = false;
  ReflectionReport reflection;

  const Family& reflection_family() const noexcept { return dual.family; }
};

class ReflectionError : public std::runtime_error {
public:
  explicit ReflectionError(ReflectionReport report)
    : std::runtime_error(std::string("not a reflection: ") + to_string(*report.failed_condition()) +
                         " condition failed"),
      report_(std::move(report)) {}

  const ReflectionReport& report() const noexcept { return report_; }

private:
  ReflectionReport report_;
};

/// Builds the context. With `require_reflection` the reflection hypothesis
/// is checked and a failure throws ReflectionError; without it the context
/// records the report but is marked unchecked.
inline DualityContext make_context(const GameInstance& primal, const Family& r, bool require_reflection = true,
                                   std::uint64_t budget = kDefaultBudget) {
  DualityContext ctx{primal, dualize(primal, r), false, is_reflection(r, primal.family, budget)};
  if (require_reflection && !ctx.reflection.holds())
    throw ReflectionError(ctx.reflection);
  ctx.reflection_checked = ctx.reflection.holds();
  return ctx;
}

enum class Theorem { t1, t2, t3, t4 };
enum class Direction { forward, backward };

inline constexpr std::array<Theorem, 4> kAllTheorems{Theorem::t1, Theorem::t2, Theorem::t3, Theorem::t4};

inline const char* to_string(Theorem t) {
  switch (t) {
  case Theorem::t1: return "t1";
  case Theorem::t2: return "t2";
  case Theorem::t3: return "t3";
  case Theorem::t4: return "t4";
  }
  return "?";
}

inline const char* to_string(Direction d) { return d == Direction::forward ? "forward" : "backward"; }

inline std::optional<Theorem> theorem_from_string(const std::string& s) {
  for (auto t : kAllTheorems)
    if (s == to_string(t))
      return t;
  return std::nullopt;
}

inline std::optional<Direction> direction_from_string(const std::string& s) {
  if (s == "forward")
    return Direction::forward;
  if (s == "backward")
    return Direction::backward;
  return std::nullopt;
}

/// Relation whose witness a translation consumes. Forward translations read
/// primal strategies, backward ones read dual strategies.
inline Relation source_relation(Theorem t, Direction d) {
  const bool fwd = d == Direction::forward;
  switch (t) {
  case Theorem::t1: return fwd ? Relation::I_pre : Relation::II_markov;
  case Theorem::t2: return fwd ? Relation::II_markov : Relation::I_pre;
  case Theorem::t3: return fwd ? Relation::I_full : Relation::II_full;
  case Theorem::t4: return fwd ? Relation::II_full : Relation::I_full;
  }
  return Relation::I_full;
}

/// Relation the translated strategy witnesses in the other game.
inline Relation target_relation(Theorem t, Direction d) {
  return source_relation(t, d == Direction::forward ? Direction::backward : Direction::forward);
}

/// One choice made while translating. `key` and `value` are indices whose
/// meaning depends on `role`:
///   f_n    key {round}, value = choice function on R (atom per member)
///   f_A    key {member of A}, value = choice function on R
///   f_s    key = dual history of R-indices, value = choice function on R
///   tau_n  key {round}, value {member index played}
///   A_rn   key {round, atom}, value {member of A realising the atom}
///   R_pre  key = primal atom history, value {member of R}
///   tau_s  key = dual atom history, value {member of R played}
///   a_ext  key = dual atom history, value = sequence of members of A
struct ChoiceStep {
  std::string role;
  std::vector<std::size_t> key;
  std::vector<std::size_t> value;
  bool off_path = false;
};

struct Translation {
  Strategy strategy;
  std::vector<ChoiceStep> provenance;
  /// Table keys filled with arbitrary least values; never reached in play.
  std::set<std::vector<std::size_t>> off_path;
};

/// The reflection hypothesis failed at some point of a construction.
class TranslationError : public std::runtime_error {
public:
  TranslationError(ReflectionCondition condition, const std::string& what_arg,
                   std::optional<ChoiceFunction> witness = std::nullopt)
    : std::runtime_error(what_arg), condition_(condition), witness_(std::move(witness)) {}

  ReflectionCondition condition() const noexcept { return condition_; }
  const std::optional<ChoiceFunction>& witness() const noexcept { return witness_; }

private:
  ReflectionCondition condition_;
  std::optional<ChoiceFunction> witness_;
};

namespace detail {

template <class T>
const T& expect(const Strategy& s, const char* what) {
  const T* p = std::get_if<T>(&s);
  if (!p)
    throw DomainError(std::string("translation expects ") + what);
  return *p;
}

inline ChoiceFunction least_within_or_throw(const Family& r, AtomSet bound, const Universe& u,
                                            const std::string& where) {
  auto f = least_choice_within(r, bound);
  if (!f) {
    std::string bad;
    for (MemberIndex i = 0; i < r.size(); ++i)
      if (!r[i].intersects(bound)) {
        bad = u.describe(r[i]);
        break;
      }
    throw TranslationError(ReflectionCondition::coinitial,
                           "no choice function with range inside " + u.describe(bound) + " at " + where +
                             ": member " + bad + " misses it");
  }
  return *f;
}

inline MemberIndex range_member_or_throw(const Family& a, const ChoiceFunction& f, const Universe& u,
                                         const std::string& where) {
  auto idx = a.index_of(f.range());
  if (!idx)
    throw TranslationError(ReflectionCondition::subset,
                           "range " + u.describe(f.range()) + " is not a member at " + where, f);
  return *idx;
}

/// Failure witness: for each R, an atom that no strategy value hits.
inline TranslationError hit_failure(const Family& r, AtomSet hit, const Family& a, const std::string& where) {
  ChoiceFunction g;
  for (auto m : r.members)
    g.assignment.push_back((m - hit).min());
  const auto& u = r.universe;
  std::string msg = "no member of the reflection is hit entirely at " + where + "; choice function with range " +
                    u.describe(g.range()) + (a.contains(g.range()) ? " (a member, contradiction)" : " (not a member)");
  return TranslationError(a.contains(g.range()) ? ReflectionCondition::coinitial : ReflectionCondition::subset, msg,
                          g);
}

inline std::string hist(const std::vector<std::size_t>& h) {
  std::string s = "<";
  for (std::size_t i = 0; i < h.size(); ++i)
    s += (i ? "," : "") + std::to_string(h[i]);
  return s + ">";
}

} // namespace detail

/// Predetermined I (primal) <-> Markov II (dual).
inline Translation t1(const DualityContext& ctx, Direction dir, const Strategy& s) {
  const Family& a = ctx.primal.family;
  const Family& r = ctx.reflection_family();
  const Universe& u = a.universe;
  Translation out;
  if (dir == Direction::forward) {
    const auto& sigma = detail::expect<PredeterminedStrategyI>(s, "a predetermined strategy for I in the primal game");
    MarkovStrategyII tau;
    for (std::size_t n = 0; n < sigma.horizon(); ++n) {
      if (sigma.moves[n] >= a.size())
        throw LegalityError("member index outside the family", n);
      auto f = detail::least_within_or_throw(r, a[sigma.moves[n]], u, "round " + std::to_string(n));
      out.provenance.push_back({"f_n", {n}, f.assignment});
      tau.table.push_back(f.assignment);
    }
    out.strategy = std::move(tau);
  } else {
    const auto& sigma = detail::expect<MarkovStrategyII>(s, "a Markov strategy for II in the dual game");
    PredeterminedStrategyI tau;
    for (std::size_t n = 0; n < sigma.horizon(); ++n) {
      ChoiceFunction f;
      for (MemberIndex i = 0; i < r.size(); ++i) {
        const AtomIndex x = sigma.at(i, n);
        if (!r[i].contains(x))
          throw LegalityError("Markov pick outside member " + std::to_string(i), n);
        f.assignment.push_back(x);
      }
      out.provenance.push_back({"f_n", {n}, f.assignment});
      auto m = detail::range_member_or_throw(a, f, u, "round " + std::to_string(n));
      out.provenance.push_back({"tau_n", {n}, {m}});
      tau.moves.push_back(m);
    }
    out.strategy = std::move(tau);
  }
  return out;
}

/// Markov II (primal) <-> predetermined I (dual).
inline Translation t2(const DualityContext& ctx, Direction dir, const Strategy& s) {
  const Family& a = ctx.primal.family;
  const Family& r = ctx.reflection_family();
  const Universe& u = a.universe;
  Translation out;
  if (dir == Direction::forward) {
    const auto& sigma = detail::expect<MarkovStrategyII>(s, "a Markov strategy for II in the primal game");
    PredeterminedStrategyI tau;
    for (std::size_t n = 0; n < sigma.horizon(); ++n) {
      AtomSet hit;
      std::vector<std::pair<AtomIndex, MemberIndex>> realiser;
      for (MemberIndex i = 0; i < a.size(); ++i) {
        const AtomIndex x = sigma.at(i, n);
        if (!a[i].contains(x))
          throw LegalityError("Markov pick outside member " + std::to_string(i), n);
        if (!hit.contains(x))
          realiser.emplace_back(x, i);
        hit.insert(x);
      }
      std::optional<MemberIndex> chosen;
      for (MemberIndex j = 0; j < r.size(); ++j)
        if (r[j].subset_of(hit)) {
          chosen = j;
          break;
        }
      if (!chosen)
        throw detail::hit_failure(r, hit, a, "round " + std::to_string(n));
      out.provenance.push_back({"tau_n", {n}, {*chosen}});
      for (auto [x, i] : realiser)
        if (r[*chosen].contains(x))
          out.provenance.push_back({"A_rn", {n, x}, {i}});
      tau.moves.push_back(*chosen);
    }
    out.strategy = std::move(tau);
  } else {
    const auto& sigma = detail::expect<PredeterminedStrategyI>(s, "a predetermined strategy for I in the dual game");
    std::vector<ChoiceFunction> fa;
    for (MemberIndex i = 0; i < a.size(); ++i) {
      fa.push_back(detail::least_within_or_throw(r, a[i], u, "member " + u.describe(a[i])));
      out.provenance.push_back({"f_A", {i}, fa.back().assignment});
    }
    MarkovStrategyII tau;
    for (std::size_t n = 0; n < sigma.horizon(); ++n) {
      if (sigma.moves[n] >= r.size())
        throw LegalityError("member index outside the reflection", n);
      std::vector<AtomIndex> column;
      for (MemberIndex i = 0; i < a.size(); ++i)
        column.push_back(fa[i](sigma.moves[n]));
      tau.table.push_back(std::move(column));
    }
    out.strategy = std::move(tau);
  }
  return out;
}

namespace detail {

struct T3Forward {
  const DualityContext& ctx;
  const Strategy& sigma;
  FullStrategyII tau;
  Translation& out;

  // s: dual history (R indices); c: the primal attack it corresponds to.
  void visit(std::vector<MemberIndex>& s, std::vector<AtomIndex>& c) {
    const Family& a = ctx.primal.family;
    const Family& r = ctx.reflection_family();
    const MemberIndex played = move_of(sigma, ctx.primal, c);
    auto f = least_within_or_throw(r, a[played], a.universe, "dual history " + hist(s));
    out.provenance.push_back({"f_s", s, f.assignment});
    for (MemberIndex i = 0; i < r.size(); ++i) {
      s.push_back(i);
      tau.table[s] = f(i);
      if (s.size() < ctx.primal.horizon) {
        c.push_back(f(i));
        visit(s, c);
        c.pop_back();
      }
      s.pop_back();
    }
  }
};

struct T3Backward {
  const DualityContext& ctx;
  const Strategy& sigma;
  AtomSet support;
  FullStrategyI tau;
  Translation& out;
  Budget budget{kDefaultBudget};

  ChoiceFunction f_of(std::vector<MemberIndex>& rho) {
    const Family& r = ctx.reflection_family();
    ChoiceFunction f;
    for (MemberIndex i = 0; i < r.size(); ++i) {
      rho.push_back(i);
      f.assignment.push_back(reply_of(sigma, ctx.dual, rho));
      rho.pop_back();
    }
    return f;
  }

  // t: primal atom history; rho: dual history of the same length.
  void visit(std::vector<AtomIndex>& t, std::vector<MemberIndex>& rho, bool on_path) {
    budget.tick("translation");
    const Family& a = ctx.primal.family;
    const Family& r = ctx.reflection_family();
    auto f = f_of(rho);
    out.provenance.push_back({"f_s", rho, f.assignment, !on_path});
    const MemberIndex m = range_member_or_throw(a, f, a.universe, "primal history " + hist(t));
    tau.table[t] = m;
    if (!on_path)
      out.off_path.insert(t);
    if (t.size() + 1 >= ctx.primal.horizon)
      return;
    const AtomSet range = f.range();
    for (auto x : support.indices()) {
      MemberIndex pre = 0;
      const bool reached = on_path && range.contains(x);
      if (range.contains(x))
        for (MemberIndex i = 0; i < r.size(); ++i)
          if (f(i) == x) {
            pre = i;
            break;
          }
      t.push_back(x);
      out.provenance.push_back({"R_pre", t, {pre}, !reached});
      rho.push_back(pre);
      visit(t, rho, reached);
      rho.pop_back();
      t.pop_back();
    }
  }
};

struct T4Forward {
  const DualityContext& ctx;
  const Strategy& sigma;
  FullStrategyI tau;
  Translation& out;

  // s: dual atom history; ext: the primal attack a(s).
  void visit(std::vector<AtomIndex>& s, std::vector<MemberIndex>& ext) {
    const Family& a = ctx.primal.family;
    const Family& r = ctx.reflection_family();
    AtomSet hit;
    std::vector<std::optional<MemberIndex>> realiser(a.universe.size());
    for (MemberIndex i = 0; i < a.size(); ++i) {
      ext.push_back(i);
      const AtomIndex x = reply_of(sigma, ctx.primal, ext);
      ext.pop_back();
      if (!realiser[x])
        realiser[x] = i;
      hit.insert(x);
    }
    std::optional<MemberIndex> chosen;
    for (MemberIndex j = 0; j < r.size(); ++j)
      if (r[j].subset_of(hit)) {
        chosen = j;
        break;
      }
    if (!chosen)
      throw hit_failure(r, hit, a, "dual history " + hist(s));
    tau.table[s] = *chosen;
    out.provenance.push_back({"tau_s", s, {*chosen}});
    if (s.size() + 1 >= ctx.primal.horizon)
      return;
    for (auto x : r[*chosen].indices()) {
      s.push_back(x);
      ext.push_back(*realiser[x]);
      out.provenance.push_back({"a_ext", s, ext});
      visit(s, ext);
      ext.pop_back();
      s.pop_back();
    }
  }
};

struct T4Backward {
  const DualityContext& ctx;
  const Strategy& sigma;
  std::vector<ChoiceFunction> fa;
  FullStrategyII tau;

  // s: primal history of A indices; rr: the dual attack r(s).
  void visit(std::vector<MemberIndex>& s, std::vector<AtomIndex>& rr) {
    const Family& a = ctx.primal.family;
    const MemberIndex offered = move_of(sigma, ctx.dual, rr);
    for (MemberIndex i = 0; i < a.size(); ++i) {
      const AtomIndex x = fa[i](offered);
      s.push_back(i);
      tau.table[s] = x;
      if (s.size() < ctx.primal.horizon) {
        rr.push_back(x);
        visit(s, rr);
        rr.pop_back();
      }
      s.pop_back();
    }
  }
};

} // namespace detail

/// Perfect-information I (primal) <-> perfect-information II (dual).
inline Translation t3(const DualityContext& ctx, Direction dir, const Strategy& s) {
  Translation out;
  if (dir == Direction::forward) {
    detail::expect<FullStrategyI>(s, "a full strategy for I in the primal game");
    detail::T3Forward w{ctx, s, FullStrategyII{ctx.primal.horizon, {}}, out};
    std::vector<MemberIndex> hs;
    std::vector<AtomIndex> c;
    w.visit(hs, c);
    out.strategy = std::move(w.tau);
  } else {
    detail::expect<FullStrategyII>(s, "a full strategy for II in the dual game");
    detail::T3Backward w{ctx, s, ctx.primal.family.support(), FullStrategyI{ctx.primal.horizon, {}}, out};
    std::vector<AtomIndex> t;
    std::vector<MemberIndex> rho;
    w.visit(t, rho, true);
    out.strategy = std::move(w.tau);
  }
  return out;
}

/// Perfect-information II (primal) <-> perfect-information I (dual).
inline Translation t4(const DualityContext& ctx, Direction dir, const Strategy& s) {
  Translation out;
  if (dir == Direction::forward) {
    detail::expect<FullStrategyII>(s, "a full strategy for II in the primal game");
    detail::T4Forward w{ctx, s, FullStrategyI{ctx.primal.horizon, {}}, out};
    std::vector<AtomIndex> hs;
    std::vector<MemberIndex> ext;
    w.visit(hs, ext);
    out.strategy = std::move(w.tau);
  } else {
    detail::expect<FullStrategyI>(s, "a full strategy for I in the dual game");
    const Family& a = ctx.primal.family;
    std::vector<ChoiceFunction> fa;
    for (MemberIndex i = 0; i < a.size(); ++i) {
      fa.push_back(detail::least_within_or_throw(ctx.reflection_family(), a[i], a.universe,
                                                 "member " + a.universe.describe(a[i])));
      out.provenance.push_back({"f_A", {i}, fa.back().assignment});
    }
    detail::T4Backward w{ctx, s, std::move(fa), FullStrategyII{ctx.primal.horizon, {}}};
    std::vector<MemberIndex> hs;
    std::vector<AtomIndex> rr;
    w.visit(hs, rr);
    out.strategy = std::move(w.tau);
  }
  return out;
}

inline Translation translate(Theorem t, Direction dir, const DualityContext& ctx, const Strategy& s) {
  switch (t) {
  case Theorem::t1: return t1(ctx, dir, s);
  case Theorem::t2: return t2(ctx, dir, s);
  case Theorem::t3: return t3(ctx, dir, s);
  case Theorem::t4: return t4(ctx, dir, s);
  }
  throw DomainError("unknown theorem");
}

/// Game a translation reads from (forward: primal) and writes for.
inline const GameInstance& source_game(const DualityContext& ctx, Direction d) {
  return d == Direction::forward ? ctx.primal : ctx.dual;
}

inline const GameInstance& target_game(const DualityContext& ctx, Direction d) {
  return d == Direction::forward ? ctx.dual : ctx.primal;
}

// ---------------------------------------------------------------- duality

struct Equivalence {
  Relation primal_relation;
  Relation dual_relation;
  bool primal = false;
  bool dual = false;

  bool holds() const noexcept { return primal == dual; }
  std::string name() const { return std::string(to_string(primal_relation)) + "<->dual." + to_string(dual_relation); }
};

struct DualityReport {
  ReflectionReport reflection;
  /// False when the reflection check failed and nothing was solved.
  bool solved = false;
  Verdicts primal;
  Verdicts dual;
  std::array<Equivalence, 4> equivalences{};
  std::uint64_t nodes = 0;

  bool all_hold() const noexcept {
    if (!solved)
      return false;
    for (const auto& e : equivalences)
      if (!e.holds())
        return false;
    return true;
  }
};

inline constexpr std::array<std::pair<Relation, Relation>, 4> kDualPairs{{
  {Relation::I_pre, Relation::II_markov},
  {Relation::II_markov, Relation::I_pre},
  {Relation::I_full, Relation::II_full},
  {Relation::II_full, Relation::I_full},
}};

/// Solves all four relations on both games independently and compares them
/// pairwise. With `require_reflection` nothing is solved unless R reflects A.
inline DualityReport verify_duality(const GameInstance& primal, const Family& r, const SolverOptions& opts = {},
                                    bool require_reflection = true) {
  DualityReport rep;
  rep.reflection = is_reflection(r, primal.family, opts.budget);
  if (require_reflection && !rep.reflection.holds())
    return rep;
  const GameInstance dual = dualize(primal, r);
  rep.primal = solve_all(primal, opts, &rep.nodes);
  rep.dual = solve_all(dual, opts, &rep.nodes);
  for (std::size_t i = 0; i < kDualPairs.size(); ++i) {
    auto [p, d] = kDualPairs[i];
    rep.equivalences[i] = Equivalence{p, d, rep.primal.get(p), rep.dual.get(d)};
  }
  rep.solved = true;
  return rep;
}

struct SoundnessCase {
  Theorem theorem = Theorem::t1;
  Direction direction = Direction::forward;
  bool source_holds = false;
  /// Translation ran without error.
  bool translated = false;
  bool winning = false;
  std::string error;

  /// Vacuously sound when there is no source witness.
  bool sound() const noexcept { return !source_holds || (translated && winning); }
};

/// For each of the eight translations: extract the solver's witness in the
/// source game (if any), translate it and certify the result in the target.
inline std::vector<SoundnessCase> translation_soundness(const DualityContext& ctx, const SolverOptions& opts = {}) {
  std::vector<SoundnessCase> out;
  for (auto t : kAllTheorems)
    for (auto d : {Direction::forward, Direction::backward}) {
      SoundnessCase c{t, d};
      auto rep = solve(source_game(ctx, d), source_relation(t, d), opts);
      c.source_holds = rep.holds;
      if (rep.holds) {
        try {
          auto tr = translate(t, d, ctx, *rep.witness);
          c.translated = true;
          c.winning = verify_strategy(target_game(ctx, d), tr.strategy, opts.budget).winning;
        } catch (const std::exception& e) {
          c.error = e.what();
        }
      }
      out.push_back(std::move(c));
    }
  return out;
}

} // namespace selgame
