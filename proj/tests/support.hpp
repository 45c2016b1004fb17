#pragma once

#include <functional>
#include <random>

#include "selgame/selgame.hpp"

namespace testing_support {

using namespace selgame;

inline Family family_of(const Universe& u, std::vector<AtomSet> members) { return Family{u, std::move(members)}; }

/// U={1,2}, A={{1},{1,2}}, B={{1}}, N=1.
inline GameInstance fix_a() {
  auto u = Universe::from_ids({"1", "2"});
  return GameInstance{family_of(u, {AtomSet::of({0}), AtomSet::of({0, 1})}),
                      PayoffPredicate::extensional(2, {AtomSet::of({0})}), 1};
}

/// Discrete 2-point Rothberger game with the singleton basis.
inline FiniteSpace discrete_singletons(std::size_t n) {
  auto x = discrete_space(n);
  return with_basis(x, minimal_basis(x));
}

inline NamedGameResult fix_b(std::size_t n) { return named_game(discrete_singletons(2), NamedGame::rothberger, n); }

// ---------------------------------------------------------------- random

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  std::size_t pick(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); }
  bool coin() { return pick(0, 1) == 1; }

  AtomSet nonempty_subset(std::size_t n, std::size_t max_size) {
    AtomSet s;
    const std::size_t k = pick(1, std::min(n, max_size));
    while (s.size() < k)
      s.insert(static_cast<AtomIndex>(pick(0, n - 1)));
    return s;
  }

  Family family(const Universe& u, std::size_t max_members, std::size_t max_size) {
    Family f{u, {}};
    const std::size_t k = pick(1, max_members);
    for (std::size_t tries = 0; f.size() < k && tries < 50; ++tries) {
      auto s = nonempty_subset(u.size(), max_size);
      if (!f.contains(s))
        f.members.push_back(s);
    }
    return f;
  }

  PayoffPredicate payoff(std::size_t n) {
    std::vector<AtomSet> sets;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m)
      if (coin())
        sets.push_back(AtomSet(m));
    return PayoffPredicate::extensional(n, sets, coin());
  }

  GameInstance instance(std::size_t max_atoms, std::size_t max_members, std::size_t max_size, std::size_t max_n) {
    const std::size_t n = pick(1, max_atoms);
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i)
      ids.push_back(std::string(1, static_cast<char>('a' + i)));
    auto u = Universe::from_ids(ids);
    return GameInstance{family(u, max_members, max_size), payoff(n), pick(1, max_n)};
  }
};

// ---------------------------------------------------------------- naive oracle
//
// Plain game-tree enumeration over move sequences. No state merging, no
// minimal-member restriction, no transversals.

inline std::vector<AtomIndex> atoms_of(AtomSet s) { return s.indices(); }

inline AtomSet set_of(const std::vector<AtomIndex>& picks) {
  AtomSet s;
  for (auto a : picks)
    s.insert(a);
  return s;
}

inline bool naive_ii_full(const GameInstance& g, std::vector<AtomIndex>& picks) {
  if (picks.size() == g.horizon)
    return g.payoff.eval(set_of(picks));
  for (auto m : g.family.members) {
    bool reply = false;
    for (auto a : atoms_of(m)) {
      picks.push_back(a);
      reply = naive_ii_full(g, picks);
      picks.pop_back();
      if (reply)
        break;
    }
    if (!reply)
      return false;
  }
  return true;
}

inline bool naive_ii_full(const GameInstance& g) {
  std::vector<AtomIndex> picks;
  return naive_ii_full(g, picks);
}

inline bool naive_i_full(const GameInstance& g, std::vector<AtomIndex>& picks) {
  if (picks.size() == g.horizon)
    return !g.payoff.eval(set_of(picks));
  for (auto m : g.family.members) {
    bool all = true;
    for (auto a : atoms_of(m)) {
      picks.push_back(a);
      all = naive_i_full(g, picks);
      picks.pop_back();
      if (!all)
        break;
    }
    if (all)
      return true;
  }
  return false;
}

/// Every response sequence to the fixed I moves loses for II.
inline bool naive_pre_wins(const GameInstance& g, const std::vector<MemberIndex>& moves, std::vector<AtomIndex>& picks) {
  if (picks.size() == g.horizon)
    return !g.payoff.eval(set_of(picks));
  for (auto a : atoms_of(g.family[moves[picks.size()]])) {
    picks.push_back(a);
    bool ok = naive_pre_wins(g, moves, picks);
    picks.pop_back();
    if (!ok)
      return false;
  }
  return true;
}

inline bool odometer(std::vector<std::size_t>& digits, const std::vector<std::size_t>& radix) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (++digits[i] < radix[i])
      return true;
    digits[i] = 0;
  }
  return false;
}

inline bool naive_i_pre(const GameInstance& g) {
  std::vector<std::size_t> moves(g.horizon, 0), radix(g.horizon, g.family.size());
  do {
    std::vector<AtomIndex> picks;
    if (naive_pre_wins(g, moves, picks))
      return true;
  } while (odometer(moves, radix));
  return false;
}

inline bool naive_markov_wins(const GameInstance& g, const MarkovStrategyII& t) {
  std::vector<std::size_t> attack(g.horizon, 0), radix(g.horizon, g.family.size());
  do {
    AtomSet s;
    for (std::size_t r = 0; r < g.horizon; ++r)
      s.insert(t.at(attack[r], r));
    if (!g.payoff.eval(s))
      return false;
  } while (odometer(attack, radix));
  return true;
}

inline bool naive_ii_markov(const GameInstance& g) {
  const std::size_t k = g.family.size();
  std::vector<std::size_t> cells(k * g.horizon, 0), radix;
  for (std::size_t r = 0; r < g.horizon; ++r)
    for (auto m : g.family.members)
      radix.push_back(m.size());
  do {
    MarkovStrategyII t;
    for (std::size_t r = 0; r < g.horizon; ++r) {
      t.table.emplace_back();
      for (std::size_t i = 0; i < k; ++i)
        t.table.back().push_back(atoms_of(g.family[i])[cells[r * k + i]]);
    }
    if (naive_markov_wins(g, t))
      return true;
  } while (odometer(cells, radix));
  return false;
}

inline Verdicts naive_verdicts(const GameInstance& g) {
  Verdicts v;
  v.ii_full = naive_ii_full(g);
  std::vector<AtomIndex> picks;
  v.i_full = naive_i_full(g, picks);
  v.i_pre = naive_i_pre(g);
  v.ii_markov = naive_ii_markov(g);
  return v;
}

/// Ranges of all choice functions by direct product enumeration.
inline std::vector<AtomSet> naive_ranges(const Family& r) {
  std::vector<AtomSet> out;
  std::vector<std::size_t> digits(r.size(), 0), radix;
  for (auto m : r.members)
    radix.push_back(m.size());
  if (r.size() == 0)
    return {AtomSet{}};
  do {
    AtomSet s;
    for (std::size_t i = 0; i < r.size(); ++i)
      s.insert(atoms_of(r[i])[digits[i]]);
    out.push_back(s);
  } while (odometer(digits, radix));
  return out;
}

} // namespace testing_support
