#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "selgame/core.hpp"
#include "selgame/strategies.hpp"

namespace selgame {

/// The four win relations: I has a winning (perfect-information /
/// predetermined) strategy, II has a winning (perfect-information / Markov)
/// strategy.
enum class Relation { I_full, I_pre, II_full, II_markov };

inline constexpr std::array<Relation, 4> kAllRelations{Relation::I_full, Relation::I_pre, Relation::II_full,
                                                       Relation::II_markov};

inline const char* to_string(Relation r) {
  switch (r) {
  case Relation::I_full: return "I_full";
  case Relation::I_pre: return "I_pre";
  case Relation::II_full: return "II_full";
  case Relation::II_markov: return "II_markov";
  }
  return "?";
}

inline std::optional<Relation> relation_from_string(const std::string& s) {
  for (auto r : kAllRelations)
    if (s == to_string(r))
      return r;
  return std::nullopt;
}

inline Player player_of(Relation r) {
  return r == Relation::I_full || r == Relation::I_pre ? Player::I : Player::II;
}

inline constexpr std::uint64_t kDefaultBudget = 1'000'000;

struct SolverOptions {
  std::uint64_t budget = kDefaultBudget;
  /// Cache verdicts per (round, selected set) / (round, reachable sets).
  bool memoize = true;
  /// Decide I_pre and II_markov by plain enumeration of every strategy
  /// table instead of the pruned search. Used for cross-checking.
  bool exhaustive = false;
};

struct SolveReport {
  Relation relation = Relation::I_full;
  bool holds = false;
  std::optional<Strategy> witness;
  std::uint64_t nodes = 0;
  bool bound_hit = false;
};

/// Node counter shared by one solve; throws BoundExceeded past the limit.
class Budget {
public:
  explicit Budget(std::uint64_t limit) : limit_(limit) {}

  void tick(const char* what) {
    if (++used_ > limit_)
      throw BoundExceeded(std::string(what) + " after " + std::to_string(limit_) + " nodes");
  }

  std::uint64_t used() const noexcept { return used_; }

private:
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
};

/// Sorted, duplicate-free collection of selected sets reachable so far.
using Reachable = std::vector<AtomSet>;

inline Reachable expand(const Reachable& sets, AtomSet picks) {
  Reachable out;
  out.reserve(sets.size() * picks.size());
  const auto atoms = picks.indices();
  for (auto s : sets)
    for (auto a : atoms)
      out.push_back(s.with(a));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// The inclusion-minimal sets meeting every given member, sorted by bits.
/// These are exactly the minimal ranges of choice functions on `members`.
inline std::vector<AtomSet> minimal_transversals(const std::vector<AtomSet>& members, Budget& budget) {
  std::vector<AtomSet> partial{AtomSet{}};
  for (auto m : members) {
    std::vector<AtomSet> next;
    for (auto p : partial) {
      budget.tick("transversal enumeration");
      if (p.intersects(m)) {
        next.push_back(p);
        continue;
      }
      for (auto a : m.indices())
        next.push_back(p.with(a));
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    partial = std::move(next);
  }
  std::vector<AtomSet> out;
  for (auto t : partial) {
    bool minimal = true;
    for (auto o : partial)
      if (o != t && o.subset_of(t)) {
        minimal = false;
        break;
      }
    if (minimal)
      out.push_back(t);
  }
  return out;
}

namespace detail {

struct ReachableHash {
  std::size_t operator()(const Reachable& r) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto s : r)
      h = (h ^ s.bits()) * 1099511628211ULL;
    return static_cast<std::size_t>(h);
  }
};

class Search {
public:
  Search(const GameInstance& g, const SolverOptions& opts) : g_(g), opts_(opts), budget_(opts.budget) {
    minimal_ = g.family.minimal_indices();
  }

  std::uint64_t nodes() const noexcept { return budget_.used(); }

  bool payoff(AtomSet s) {
    auto it = payoff_cache_.find(s.bits());
    if (it != payoff_cache_.end())
      return it->second;
    bool v = g_.payoff.eval(s);
    payoff_cache_.emplace(s.bits(), v);
    return v;
  }

  // ---- perfect information: backward induction over (round, selected set)

  bool ii_wins_from(std::size_t round, AtomSet selected) {
    budget_.tick("perfect-information search");
    if (round == g_.horizon)
      return payoff(selected);
    if (opts_.memoize) {
      if (full_memo_.size() <= round)
        full_memo_.resize(g_.horizon);
      auto it = full_memo_[round].find(selected.bits());
      if (it != full_memo_[round].end())
        return it->second;
    }
    bool result = true;
    // Only inclusion-minimal moves matter to I: a subset leaves II fewer replies.
    for (auto m : minimal_) {
      bool answered = false;
      for (auto a : g_.family[m].indices())
        if (ii_wins_from(round + 1, selected.with(a))) {
          answered = true;
          break;
        }
      if (!answered) {
        result = false;
        break;
      }
    }
    if (opts_.memoize)
      full_memo_[round].emplace(selected.bits(), result);
    return result;
  }

  FullStrategyII full_ii_witness() {
    FullStrategyII s{g_.horizon, {}};
    std::vector<MemberIndex> h;
    build_full_ii(h, AtomSet{}, s);
    return s;
  }

  FullStrategyI full_i_witness() {
    FullStrategyI s{g_.horizon, {}};
    std::vector<AtomIndex> h;
    build_full_i(h, AtomSet{}, s);
    return s;
  }

  // ---- predetermined I: search over reachable-set collections

  bool i_pre_wins_from(std::size_t round, const Reachable& sets) {
    budget_.tick("predetermined search");
    if (round == g_.horizon) {
      for (auto s : sets)
        if (payoff(s))
          return false;
      return true;
    }
    if (auto cached = lookup(pre_memo_, round, sets))
      return *cached;
    bool result = false;
    for (auto m : minimal_)
      if (i_pre_wins_from(round + 1, expand(sets, g_.family[m]))) {
        result = true;
        break;
      }
    store(pre_memo_, round, sets, result);
    return result;
  }

  std::optional<PredeterminedStrategyI> i_pre_witness() {
    Reachable sets{AtomSet{}};
    if (!i_pre_wins_from(0, sets))
      return std::nullopt;
    PredeterminedStrategyI s;
    for (std::size_t r = 0; r < g_.horizon; ++r)
      for (MemberIndex m = 0; m < g_.family.size(); ++m) {
        auto next = expand(sets, g_.family[m]);
        if (i_pre_wins_from(r + 1, next)) {
          s.moves.push_back(m);
          sets = std::move(next);
          break;
        }
      }
    return s;
  }

  std::optional<PredeterminedStrategyI> i_pre_exhaustive() {
    const std::size_t n = g_.horizon, k = g_.family.size();
    std::vector<MemberIndex> seq(n, 0);
    while (true) {
      budget_.tick("predetermined enumeration");
      Reachable sets{AtomSet{}};
      for (auto m : seq)
        sets = expand(sets, g_.family[m]);
      bool wins = true;
      for (auto s : sets)
        if (payoff(s)) {
          wins = false;
          break;
        }
      if (wins)
        return PredeterminedStrategyI{seq};
      if (!increment(seq, [k](std::size_t) { return k; }))
        return std::nullopt;
    }
  }

  // ---- Markov II: each round's table column matters only through its
  // range; smaller ranges are better for II, so minimal transversals decide.

  bool ii_markov_wins_from(std::size_t round, const Reachable& sets) {
    budget_.tick("Markov search");
    if (round == g_.horizon) {
      for (auto s : sets)
        if (!payoff(s))
          return false;
      return true;
    }
    if (auto cached = lookup(markov_memo_, round, sets))
      return *cached;
    bool result = false;
    for (auto t : transversals())
      if (ii_markov_wins_from(round + 1, expand(sets, t))) {
        result = true;
        break;
      }
    store(markov_memo_, round, sets, result);
    return result;
  }

  std::optional<MarkovStrategyII> ii_markov_witness() {
    Reachable sets{AtomSet{}};
    if (!ii_markov_wins_from(0, sets))
      return std::nullopt;
    MarkovStrategyII s;
    const auto& members = g_.family.members;
    for (std::size_t r = 0; r < g_.horizon; ++r) {
      std::vector<AtomIndex> column;
      AtomSet used;
      for (MemberIndex j = 0; j < members.size(); ++j) {
        for (auto v : members[j].indices()) {
          AtomSet trial = used.with(v);
          std::vector<AtomSet> residual;
          for (MemberIndex k = j + 1; k < members.size(); ++k)
            if (!members[k].intersects(trial))
              residual.push_back(members[k]);
          bool feasible = false;
          for (auto t : minimal_transversals(residual, budget_))
            if (ii_markov_wins_from(r + 1, expand(sets, trial | t))) {
              feasible = true;
              break;
            }
          if (feasible) {
            column.push_back(v);
            used = trial;
            break;
          }
        }
      }
      sets = expand(sets, used);
      s.table.push_back(std::move(column));
    }
    return s;
  }

  std::optional<MarkovStrategyII> ii_markov_exhaustive() {
    const std::size_t n = g_.horizon, k = g_.family.size();
    std::vector<std::vector<AtomIndex>> options(k);
    for (MemberIndex m = 0; m < k; ++m)
      options[m] = g_.family[m].indices();
    std::vector<std::size_t> cells(n * k, 0);
    while (true) {
      budget_.tick("Markov enumeration");
      Reachable sets{AtomSet{}};
      for (std::size_t r = 0; r < n; ++r) {
        AtomSet range;
        for (MemberIndex m = 0; m < k; ++m)
          range.insert(options[m][cells[r * k + m]]);
        sets = expand(sets, range);
      }
      bool wins = true;
      for (auto s : sets)
        if (!payoff(s)) {
          wins = false;
          break;
        }
      if (wins) {
        MarkovStrategyII s;
        for (std::size_t r = 0; r < n; ++r) {
          s.table.emplace_back();
          for (MemberIndex m = 0; m < k; ++m)
            s.table.back().push_back(options[m][cells[r * k + m]]);
        }
        return s;
      }
      if (!increment(cells, [&](std::size_t i) { return options[i % k].size(); }))
        return std::nullopt;
    }
  }

private:
  using Memo = std::vector<std::unordered_map<Reachable, bool, ReachableHash>>;

  std::optional<bool> lookup(Memo& memo, std::size_t round, const Reachable& sets) const {
    if (!opts_.memoize || memo.size() <= round)
      return std::nullopt;
    auto it = memo[round].find(sets);
    if (it == memo[round].end())
      return std::nullopt;
    return it->second;
  }

  void store(Memo& memo, std::size_t round, const Reachable& sets, bool v) {
    if (!opts_.memoize)
      return;
    if (memo.size() <= round)
      memo.resize(g_.horizon);
    memo[round].emplace(sets, v);
  }

  const std::vector<AtomSet>& transversals() {
    if (!transversals_)
      transversals_ = minimal_transversals(g_.family.members, budget_);
    return *transversals_;
  }

  /// Odometer increment, position 0 most significant. Returns false on wrap.
  template <class Radix>
  static bool increment(std::vector<std::size_t>& digits, Radix radix) {
    for (std::size_t i = digits.size(); i-- > 0;) {
      if (++digits[i] < radix(i))
        return true;
      digits[i] = 0;
    }
    return false;
  }

  void build_full_ii(std::vector<MemberIndex>& h, AtomSet selected, FullStrategyII& out) {
    const std::size_t round = h.size();
    for (MemberIndex m = 0; m < g_.family.size(); ++m) {
      h.push_back(m);
      for (auto a : g_.family[m].indices())
        if (ii_wins_from(round + 1, selected.with(a))) {
          out.table[h] = a;
          if (round + 1 < g_.horizon)
            build_full_ii(h, selected.with(a), out);
          break;
        }
      h.pop_back();
    }
  }

  void build_full_i(std::vector<AtomIndex>& h, AtomSet selected, FullStrategyI& out) {
    const std::size_t round = h.size();
    for (MemberIndex m = 0; m < g_.family.size(); ++m) {
      bool refutes = true;
      for (auto a : g_.family[m].indices())
        if (ii_wins_from(round + 1, selected.with(a))) {
          refutes = false;
          break;
        }
      if (!refutes)
        continue;
      out.table[h] = m;
      if (round + 1 < g_.horizon)
        for (auto a : g_.family[m].indices()) {
          h.push_back(a);
          build_full_i(h, selected.with(a), out);
          h.pop_back();
        }
      return;
    }
  }

  const GameInstance& g_;
  SolverOptions opts_;
  Budget budget_;
  std::vector<MemberIndex> minimal_;
  std::unordered_map<std::uint64_t, bool> payoff_cache_;
  std::vector<std::unordered_map<std::uint64_t, bool>> full_memo_;
  Memo pre_memo_;
  Memo markov_memo_;
  std::optional<std::vector<AtomSet>> transversals_;
};

} // namespace detail

/// Decides one win relation exhaustively. The witness, when the relation
/// holds, is the lexicographically least winning strategy of its class
/// (table cells ordered by round, then history / member index).
inline SolveReport solve(const GameInstance& g, Relation relation, const SolverOptions& opts = {}) {
  if (g.horizon < 1)
    throw DomainError("horizon must be at least 1");
  if (g.family.members.empty())
    throw DomainError("player I has no legal move: empty family");
  detail::Search search(g, opts);
  SolveReport report;
  report.relation = relation;
  switch (relation) {
  case Relation::II_full:
    report.holds = search.ii_wins_from(0, AtomSet{});
    if (report.holds)
      report.witness = search.full_ii_witness();
    break;
  case Relation::I_full:
    report.holds = !search.ii_wins_from(0, AtomSet{});
    if (report.holds)
      report.witness = search.full_i_witness();
    break;
  case Relation::I_pre: {
    auto w = opts.exhaustive ? search.i_pre_exhaustive() : search.i_pre_witness();
    report.holds = w.has_value();
    if (w)
      report.witness = std::move(*w);
    break;
  }
  case Relation::II_markov: {
    auto w = opts.exhaustive ? search.ii_markov_exhaustive() : search.ii_markov_witness();
    report.holds = w.has_value();
    if (w)
      report.witness = std::move(*w);
    break;
  }
  }
  report.nodes = search.nodes();
  return report;
}

struct VerifyResult {
  bool winning = false;
  /// First losing attack in lexicographic order: member indices when the
  /// strategy belongs to II, atom indices when it belongs to I.
  std::vector<std::size_t> counterexample;
  std::optional<Transcript> transcript;
};

namespace detail {

inline bool verify_i(const GameInstance& g, const Strategy& s, std::vector<AtomIndex>& picks,
                     std::vector<MemberIndex>& moves, AtomSet selected, Budget& budget, VerifyResult& out) {
  budget.tick("strategy verification");
  if (picks.size() == g.horizon) {
    if (!g.payoff.eval(selected))
      return true;
    out.counterexample.assign(picks.begin(), picks.end());
    Transcript t;
    for (std::size_t r = 0; r < picks.size(); ++r)
      t.rounds.emplace_back(moves[r], picks[r]);
    t.outcome = selected;
    t.winner = Player::II;
    out.transcript = t;
    return false;
  }
  const MemberIndex m = move_of(s, g, picks);
  moves.push_back(m);
  for (auto a : g.family[m].indices()) {
    picks.push_back(a);
    bool ok = verify_i(g, s, picks, moves, selected.with(a), budget, out);
    picks.pop_back();
    if (!ok)
      return false;
  }
  moves.pop_back();
  return true;
}

inline bool verify_ii(const GameInstance& g, const Strategy& s, std::vector<MemberIndex>& moves,
                      std::vector<AtomIndex>& picks, AtomSet selected, Budget& budget, VerifyResult& out) {
  budget.tick("strategy verification");
  if (moves.size() == g.horizon) {
    if (g.payoff.eval(selected))
      return true;
    out.counterexample.assign(moves.begin(), moves.end());
    Transcript t;
    for (std::size_t r = 0; r < moves.size(); ++r)
      t.rounds.emplace_back(moves[r], picks[r]);
    t.outcome = selected;
    t.winner = Player::I;
    out.transcript = t;
    return false;
  }
  for (MemberIndex m = 0; m < g.family.size(); ++m) {
    moves.push_back(m);
    const AtomIndex a = reply_of(s, g, moves);
    picks.push_back(a);
    bool ok = verify_ii(g, s, moves, picks, selected.with(a), budget, out);
    picks.pop_back();
    moves.pop_back();
    if (!ok)
      return false;
  }
  return true;
}

} // namespace detail

/// Plays `s` against every attack of the opponent. Throws LegalityError if
/// the strategy consults a missing or illegal entry.
inline VerifyResult verify_strategy(const GameInstance& g, const Strategy& s, std::uint64_t budget_limit = kDefaultBudget) {
  if (horizon_of(s) != g.horizon)
    throw LegalityError("strategy horizon does not match the game", 0);
  Budget budget(budget_limit);
  VerifyResult out;
  if (player_of(s) == Player::I) {
    std::vector<AtomIndex> picks;
    std::vector<MemberIndex> moves;
    out.winning = detail::verify_i(g, s, picks, moves, AtomSet{}, budget, out);
  } else {
    std::vector<MemberIndex> moves;
    std::vector<AtomIndex> picks;
    out.winning = detail::verify_ii(g, s, moves, picks, AtomSet{}, budget, out);
  }
  return out;
}

/// Verdicts of the four relations on one game.
struct Verdicts {
  bool i_full = false;
  bool i_pre = false;
  bool ii_full = false;
  bool ii_markov = false;

  bool get(Relation r) const {
    switch (r) {
    case Relation::I_full: return i_full;
    case Relation::I_pre: return i_pre;
    case Relation::II_full: return ii_full;
    case Relation::II_markov: return ii_markov;
    }
    return false;
  }

  void set(Relation r, bool v) {
    switch (r) {
    case Relation::I_full: i_full = v; break;
    case Relation::I_pre: i_pre = v; break;
    case Relation::II_full: ii_full = v; break;
    case Relation::II_markov: ii_markov = v; break;
    }
  }

  friend bool operator==(const Verdicts&, const Verdicts&) = default;
};

struct ChainReport {
  Verdicts verdicts;
  bool consistent = true;
  std::vector<std::string> violations;
  std::uint64_t nodes = 0;
};

/// Checks II_markov => II_full => not I_full => not I_pre and finite
/// determinacy (exactly one of I_full, II_full).
inline ChainReport check_chain(const Verdicts& v) {
  ChainReport r;
  r.verdicts = v;
  if (v.ii_markov && !v.ii_full)
    r.violations.emplace_back("II_markov holds but II_full fails");
  if (v.ii_full && v.i_full)
    r.violations.emplace_back("both I_full and II_full hold");
  if (!v.ii_full && !v.i_full)
    r.violations.emplace_back("neither I_full nor II_full holds");
  if (v.i_pre && !v.i_full)
    r.violations.emplace_back("I_pre holds but I_full fails");
  r.consistent = r.violations.empty();
  return r;
}

inline Verdicts solve_all(const GameInstance& g, const SolverOptions& opts = {}, std::uint64_t* nodes = nullptr) {
  Verdicts v;
  for (auto rel : kAllRelations) {
    auto rep = solve(g, rel, opts);
    v.set(rel, rep.holds);
    if (nodes)
      *nodes += rep.nodes;
  }
  return v;
}

inline ChainReport implication_chain(const GameInstance& g, const SolverOptions& opts = {}) {
  std::uint64_t nodes = 0;
  auto v = solve_all(g, opts, &nodes);
  auto r = check_chain(v);
  r.nodes = nodes;
  return r;
}

} // namespace selgame
