#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "selgame/core.hpp"

namespace selgame {

enum class Player { I, II };

inline const char* to_string(Player p) { return p == Player::I ? "I" : "II"; }

/// Perfect-information strategy for player I, keyed by II's previous picks.
/// Histories unreachable under the strategy itself may be absent.
struct FullStrategyI {
  std::size_t horizon = 0;
  std::map<std::vector<AtomIndex>, MemberIndex> table;

  friend bool operator==(const FullStrategyI&, const FullStrategyI&) = default;
};

/// Perfect-information strategy for player II, keyed by I's moves so far
/// (length 1..horizon).
struct FullStrategyII {
  std::size_t horizon = 0;
  std::map<std::vector<MemberIndex>, AtomIndex> table;

  friend bool operator==(const FullStrategyII&, const FullStrategyII&) = default;
};

/// Player I commits to a move for every round in advance.
struct PredeterminedStrategyI {
  std::vector<MemberIndex> moves;

  std::size_t horizon() const noexcept { return moves.size(); }

  friend bool operator==(const PredeterminedStrategyI&, const PredeterminedStrategyI&) = default;
};

/// Player II sees only I's latest move and the round number.
/// `table[round][member]` is the atom picked.
struct MarkovStrategyII {
  std::vector<std::vector<AtomIndex>> table;

  std::size_t horizon() const noexcept { return table.size(); }
  AtomIndex at(MemberIndex member, std::size_t round) const { return table.at(round).at(member); }

  friend bool operator==(const MarkovStrategyII&, const MarkovStrategyII&) = default;
};

using Strategy = std::variant<FullStrategyI, FullStrategyII, PredeterminedStrategyI, MarkovStrategyII>;

inline Player player_of(const Strategy& s) {
  return std::holds_alternative<FullStrategyI>(s) || std::holds_alternative<PredeterminedStrategyI>(s) ? Player::I
                                                                                                       : Player::II;
}

inline const char* class_name(const Strategy& s) {
  if (std::holds_alternative<PredeterminedStrategyI>(s))
    return "predetermined";
  if (std::holds_alternative<MarkovStrategyII>(s))
    return "markov";
  return "full";
}

inline std::size_t horizon_of(const Strategy& s) {
  return std::visit(
    [](const auto& x) -> std::size_t {
      if constexpr (requires { x.horizon(); })
        return x.horizon();
      else
        return x.horizon;
    },
    s);
}

/// Player I's move after II has picked `history` (one atom per past round).
/// Throws LegalityError when the table has no entry or the entry is not a
/// family member.
inline MemberIndex move_of(const Strategy& sI, const GameInstance& g, std::span<const AtomIndex> history) {
  const std::size_t round = history.size();
  MemberIndex m = 0;
  if (const auto* p = std::get_if<PredeterminedStrategyI>(&sI)) {
    if (round >= p->moves.size())
      throw LegalityError("predetermined strategy has no move", round);
    m = p->moves[round];
  } else if (const auto* f = std::get_if<FullStrategyI>(&sI)) {
    auto it = f->table.find(std::vector<AtomIndex>(history.begin(), history.end()));
    if (it == f->table.end())
      throw LegalityError("full strategy for I has no entry for a reachable history", round);
    m = it->second;
  } else {
    throw LegalityError("not a strategy for player I", round);
  }
  if (m >= g.family.size())
    throw LegalityError("player I plays member index " + std::to_string(m) + " outside the family", round);
  return m;
}

/// Player II's pick after I has played `history` (nonempty). Throws
/// LegalityError when the entry is missing or not inside I's last move.
inline AtomIndex reply_of(const Strategy& sII, const GameInstance& g, std::span<const MemberIndex> history) {
  const std::size_t round = history.size() - 1;
  const MemberIndex last = history.back();
  AtomIndex a = 0;
  if (const auto* mk = std::get_if<MarkovStrategyII>(&sII)) {
    if (round >= mk->table.size() || last >= mk->table[round].size())
      throw LegalityError("Markov strategy has no entry for member " + std::to_string(last), round);
    a = mk->table[round][last];
  } else if (const auto* f = std::get_if<FullStrategyII>(&sII)) {
    auto it = f->table.find(std::vector<MemberIndex>(history.begin(), history.end()));
    if (it == f->table.end())
      throw LegalityError("full strategy for II has no entry for a reachable history", round);
    a = it->second;
  } else {
    throw LegalityError("not a strategy for player II", round);
  }
  if (!g.family[last].contains(a))
    throw LegalityError("player II picks an atom outside I's move", round);
  return a;
}

struct Transcript {
  std::vector<std::pair<MemberIndex, AtomIndex>> rounds;
  AtomSet outcome;
  Player winner = Player::I;
};

/// Plays the game to completion. Deterministic in (g, sI, sII).
inline Transcript play(const GameInstance& g, const Strategy& sI, const Strategy& sII) {
  if (player_of(sI) != Player::I)
    throw LegalityError("first strategy must belong to player I", 0);
  if (player_of(sII) != Player::II)
    throw LegalityError("second strategy must belong to player II", 0);
  Transcript t;
  std::vector<AtomIndex> picks;
  std::vector<MemberIndex> moves;
  for (std::size_t n = 0; n < g.horizon; ++n) {
    MemberIndex m = move_of(sI, g, picks);
    moves.push_back(m);
    AtomIndex a = reply_of(sII, g, moves);
    picks.push_back(a);
    t.rounds.emplace_back(m, a);
    t.outcome.insert(a);
  }
  t.winner = g.payoff.eval(t.outcome) ? Player::II : Player::I;
  return t;
}

struct LegalityReport {
  bool legal = true;
  std::string reason;
  /// For full strategies: the first offending history (atoms for I, member
  /// indices for II).
  std::vector<std::size_t> history;

  explicit operator bool() const noexcept { return legal; }
};

namespace detail {

inline LegalityReport illegal(std::string reason, std::vector<std::size_t> history = {}) {
  return LegalityReport{false, std::move(reason), std::move(history)};
}

inline LegalityReport check_full_ii(const GameInstance& g, const FullStrategyII& s, std::vector<MemberIndex>& h) {
  for (MemberIndex m = 0; m < g.family.size(); ++m) {
    h.push_back(m);
    auto it = s.table.find(h);
    if (it == s.table.end())
      return illegal("missing entry for reachable history", h);
    if (!g.family[m].contains(it->second))
      return illegal("reply outside I's move", h);
    if (h.size() < g.horizon)
      if (auto r = check_full_ii(g, s, h); !r)
        return r;
    h.pop_back();
  }
  return {};
}

inline LegalityReport check_full_i(const GameInstance& g, const FullStrategyI& s, std::vector<AtomIndex>& h) {
  auto it = s.table.find(h);
  if (it == s.table.end())
    return illegal("missing entry for reachable history", h);
  if (it->second >= g.family.size())
    return illegal("member index outside the family", h);
  if (h.size() + 1 < g.horizon) {
    for (auto a : g.family[it->second].indices()) {
      h.push_back(a);
      if (auto r = check_full_i(g, s, h); !r)
        return r;
      h.pop_back();
    }
  }
  return {};
}

} // namespace detail

/// True iff every entry the strategy can consult satisfies its class's
/// legality invariant for `g`. Full strategies are checked on histories
/// reachable under the strategy itself.
inline LegalityReport check_legal(const GameInstance& g, const Strategy& s) {
  const std::size_t n = g.horizon;
  if (horizon_of(s) != n)
    return detail::illegal("horizon " + std::to_string(horizon_of(s)) + " does not match game horizon " +
                           std::to_string(n));
  if (const auto* p = std::get_if<PredeterminedStrategyI>(&s)) {
    for (std::size_t r = 0; r < n; ++r)
      if (p->moves[r] >= g.family.size())
        return detail::illegal("round " + std::to_string(r) + ": member index outside the family", {r});
    return {};
  }
  if (const auto* mk = std::get_if<MarkovStrategyII>(&s)) {
    for (std::size_t r = 0; r < n; ++r) {
      if (mk->table[r].size() != g.family.size())
        return detail::illegal("round " + std::to_string(r) + ": table row does not cover the family", {r});
      for (MemberIndex m = 0; m < g.family.size(); ++m)
        if (!g.family[m].contains(mk->table[r][m]))
          return detail::illegal("round " + std::to_string(r) + ": pick outside member " + std::to_string(m),
                                 {m, r});
    }
    return {};
  }
  if (const auto* f = std::get_if<FullStrategyII>(&s)) {
    std::vector<MemberIndex> h;
    return detail::check_full_ii(g, *f, h);
  }
  std::vector<AtomIndex> h;
  return detail::check_full_i(g, std::get<FullStrategyI>(s), h);
}

namespace detail {

inline void induce_full_i(const GameInstance& g, const PredeterminedStrategyI& p, std::vector<AtomIndex>& h,
                          FullStrategyI& out) {
  const MemberIndex m = p.moves.at(h.size());
  out.table[h] = m;
  if (h.size() + 1 >= g.horizon)
    return;
  for (auto a : g.family[m].indices()) {
    h.push_back(a);
    induce_full_i(g, p, h, out);
    h.pop_back();
  }
}

} // namespace detail

/// The full strategy that ignores II's picks. Only reachable histories are
/// tabulated.
inline FullStrategyI to_full(const GameInstance& g, const PredeterminedStrategyI& p) {
  FullStrategyI out{p.horizon(), {}};
  if (p.horizon() == 0)
    return out;
  std::vector<AtomIndex> h;
  detail::induce_full_i(g, p, h, out);
  return out;
}

/// The full strategy that reads only I's last move and the round.
inline FullStrategyII to_full(const GameInstance& g, const MarkovStrategyII& mk) {
  FullStrategyII out{mk.horizon(), {}};
  std::vector<std::vector<MemberIndex>> layer{{}};
  for (std::size_t r = 0; r < mk.horizon(); ++r) {
    std::vector<std::vector<MemberIndex>> next;
    for (const auto& h : layer)
      for (MemberIndex m = 0; m < g.family.size(); ++m) {
        auto e = h;
        e.push_back(m);
        out.table[e] = mk.at(m, r);
        next.push_back(std::move(e));
      }
    layer = std::move(next);
  }
  return out;
}

} // namespace selgame
