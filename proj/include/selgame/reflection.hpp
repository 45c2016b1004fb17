#pragma once

#include <optional>
#include <unordered_set>
#include <utility>
#include <vector>

#include "selgame/core.hpp"
#include "selgame/solver.hpp"

namespace selgame {

/// Assigns to each family member (by index) one of its own atoms.
struct ChoiceFunction {
  std::vector<AtomIndex> assignment;

  AtomIndex operator()(MemberIndex r) const { return assignment.at(r); }

  /// Deduplicated set of assigned atoms.
  AtomSet range() const {
    AtomSet s;
    for (auto a : assignment)
      s.insert(a);
    return s;
  }

  friend bool operator==(const ChoiceFunction&, const ChoiceFunction&) = default;
};

/// Visits every choice function on `r` in lexicographic order (member 0 most
/// significant, atoms in universe order). `visit` returns false to stop early.
/// Returns false iff stopped early.
template <class Visit>
bool for_each_choice_function(const Family& r, Budget& budget, Visit visit) {
  const std::size_t k = r.size();
  std::vector<std::vector<AtomIndex>> options(k);
  for (MemberIndex i = 0; i < k; ++i) {
    options[i] = r[i].indices();
    if (options[i].empty())
      return true;
  }
  std::vector<std::size_t> digit(k, 0);
  ChoiceFunction f{std::vector<AtomIndex>(k)};
  while (true) {
    budget.tick("choice-function enumeration");
    for (MemberIndex i = 0; i < k; ++i)
      f.assignment[i] = options[i][digit[i]];
    if (!visit(static_cast<const ChoiceFunction&>(f)))
      return false;
    std::size_t i = k;
    while (i-- > 0) {
      if (++digit[i] < options[i].size())
        break;
      digit[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1))
      return true;
  }
}

inline std::vector<ChoiceFunction> enumerate_choice_functions(const Family& r, std::uint64_t budget_limit = kDefaultBudget) {
  Budget budget(budget_limit);
  std::vector<ChoiceFunction> out;
  for_each_choice_function(r, budget, [&](const ChoiceFunction& f) {
    out.push_back(f);
    return true;
  });
  return out;
}

/// Distinct ranges of all choice functions, in order of first occurrence.
inline Family choice_ranges(const Family& r, std::uint64_t budget_limit = kDefaultBudget) {
  Budget budget(budget_limit);
  Family out{r.universe, {}};
  std::unordered_set<AtomSet, AtomSetHash> seen;
  for_each_choice_function(r, budget, [&](const ChoiceFunction& f) {
    if (seen.insert(f.range()).second)
      out.members.push_back(f.range());
    return true;
  });
  return out;
}

/// The lexicographically least choice function whose range lies inside
/// `bound`: each member takes its least atom in `bound`.
inline std::optional<ChoiceFunction> least_choice_within(const Family& r, AtomSet bound) {
  ChoiceFunction f;
  for (auto m : r.members) {
    const AtomSet inside = m & bound;
    if (inside.empty())
      return std::nullopt;
    f.assignment.push_back(inside.min());
  }
  return f;
}

inline void require_same_universe(const Family& a, const Family& b) {
  if (!(a.universe == b.universe))
    throw DomainError("families are over different universes");
}

/// `sub` is coinitial in `a`: sub is contained in a, and every member of a
/// contains some member of sub.
inline bool is_selection_basis(const Family& sub, const Family& a) {
  require_same_universe(sub, a);
  for (auto s : sub.members)
    if (!a.contains(s))
      return false;
  for (auto big : a.members) {
    bool found = false;
    for (auto s : sub.members)
      if (s.subset_of(big)) {
        found = true;
        break;
      }
    if (!found)
      return false;
  }
  return true;
}

enum class ReflectionCondition { subset, coinitial };

inline const char* to_string(ReflectionCondition c) {
  return c == ReflectionCondition::subset ? "subset" : "coinitial";
}

struct ReflectionReport {
  bool subset_ok = true;
  bool coinitial_ok = true;
  /// A choice function whose range is not a member of the target.
  std::optional<ChoiceFunction> subset_witness;
  /// (reflection member, target member) that are disjoint.
  std::optional<std::pair<MemberIndex, MemberIndex>> coinitial_witness;

  bool holds() const noexcept { return subset_ok && coinitial_ok; }

  /// The first failing condition, subset before coinitial.
  std::optional<ReflectionCondition> failed_condition() const {
    if (!subset_ok)
      return ReflectionCondition::subset;
    if (!coinitial_ok)
      return ReflectionCondition::coinitial;
    return std::nullopt;
  }
};

/// Decides whether the choice-function ranges of `r` form a selection basis
/// for `a`. The subset condition needs enumeration of choice functions;
/// the coinitial condition reduces to: every member of r meets every member
/// of a (pick f(R) in R∩A).
inline ReflectionReport is_reflection(const Family& r, const Family& a, std::uint64_t budget_limit = kDefaultBudget) {
  require_same_universe(r, a);
  ReflectionReport rep;
  for (MemberIndex i = 0; i < r.size() && rep.coinitial_ok; ++i)
    for (MemberIndex j = 0; j < a.size(); ++j)
      if (!r[i].intersects(a[j])) {
        rep.coinitial_ok = false;
        rep.coinitial_witness = std::make_pair(i, j);
        break;
      }
  Budget budget(budget_limit);
  std::unordered_set<AtomSet, AtomSetHash> checked;
  for_each_choice_function(r, budget, [&](const ChoiceFunction& f) {
    const AtomSet range = f.range();
    if (!checked.insert(range).second)
      return true;
    if (a.contains(range))
      return true;
    rep.subset_ok = false;
    rep.subset_witness = f;
    return false;
  });
  return rep;
}

/// The dual game: player I offers members of `r`, and II wins iff the
/// original payoff rejects the picks.
inline GameInstance dualize(const GameInstance& g, const Family& r) {
  require_same_universe(r, g.family);
  return GameInstance{r, g.payoff.negate(), g.horizon};
}

} // namespace selgame
