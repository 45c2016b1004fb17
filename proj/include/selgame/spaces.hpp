#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "selgame/core.hpp"
#include "selgame/reflection.hpp"
#include "selgame/solver.hpp"
#include "selgame/translate.hpp"

namespace selgame {

namespace detail {

inline void sort_sets(std::vector<AtomSet>& v) {
  std::sort(v.begin(), v.end(), [](AtomSet a, AtomSet b) {
    if (a.size() != b.size())
      return a.size() < b.size();
    return a < b;
  });
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

} // namespace detail

inline ValidationReport validate_space(const FiniteSpace& sp) {
  ValidationReport r;
  const AtomSet all = sp.all_points();
  std::set<AtomSet> opens(sp.opens.begin(), sp.opens.end());
  if (!opens.count(AtomSet{}))
    r.violations.emplace_back("topology lacks the empty set");
  if (!opens.count(all))
    r.violations.emplace_back("topology lacks the whole space");
  for (auto u : sp.opens) {
    if (!u.subset_of(all))
      r.violations.push_back("open set outside the points: " + sp.points.describe(u));
    for (auto v : sp.opens) {
      if (!opens.count(u | v))
        r.violations.push_back("not closed under union: " + sp.points.describe(u | v));
      if (!opens.count(u & v))
        r.violations.push_back("not closed under intersection: " + sp.points.describe(u & v));
    }
  }
  for (auto b : sp.basis) {
    if (b.empty())
      r.violations.emplace_back("empty basis member");
    else if (!opens.count(b))
      r.violations.push_back("basis member is not open: " + sp.points.describe(b));
  }
  for (auto u : sp.opens) {
    AtomSet joined;
    for (auto b : sp.basis)
      if (b.subset_of(u))
        joined |= b;
    if (joined != u)
      r.violations.push_back("open set is not a union of basis members: " + sp.points.describe(u));
  }
  return r;
}

/// Closes the subbase under finite intersections and unions. The default
/// basis is every nonempty open set.
inline FiniteSpace topology_from_subbase(Universe points, std::vector<AtomSet> subbase) {
  const AtomSet all = points.full();
  for (auto s : subbase)
    if (!s.subset_of(all))
      throw DomainError("subbase member outside the points: " + points.describe(s));
  std::set<AtomSet> base{all};
  base.insert(subbase.begin(), subbase.end());
  for (bool grew = true; grew;) {
    grew = false;
    std::vector<AtomSet> cur(base.begin(), base.end());
    for (auto u : cur)
      for (auto v : cur)
        grew |= base.insert(u & v).second;
  }
  std::set<AtomSet> opens = base;
  opens.insert(AtomSet{});
  for (bool grew = true; grew;) {
    grew = false;
    std::vector<AtomSet> cur(opens.begin(), opens.end());
    for (auto u : cur)
      for (auto v : cur)
        grew |= opens.insert(u | v).second;
  }
  FiniteSpace sp;
  sp.points = std::move(points);
  sp.subbase = std::move(subbase);
  sp.opens.assign(opens.begin(), opens.end());
  detail::sort_sets(sp.opens);
  for (auto u : sp.opens)
    if (!u.empty())
      sp.basis.push_back(u);
  sp.basis_is_all = true;
  return sp;
}

inline Universe numbered_points(std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i)
    ids.push_back(std::to_string(i));
  return Universe::from_ids(ids);
}

/// Replaces the basis; throws DomainError if it is not a basis of nonempty
/// open sets for the topology.
inline FiniteSpace with_basis(FiniteSpace sp, std::vector<AtomSet> basis) {
  detail::sort_sets(basis);
  sp.basis = std::move(basis);
  sp.basis_is_all = false;
  auto rep = validate_space(sp);
  if (!rep.ok())
    throw DomainError("invalid basis: " + rep.violations.front());
  return sp;
}

/// The smallest basis of a finite space: the least neighbourhood of each point.
inline std::vector<AtomSet> minimal_basis(const FiniteSpace& sp) {
  std::vector<AtomSet> out;
  for (AtomIndex x = 0; x < sp.points.size(); ++x) {
    AtomSet nbhd = sp.all_points();
    for (auto u : sp.opens)
      if (u.contains(x))
        nbhd = nbhd & u;
    out.push_back(nbhd);
  }
  detail::sort_sets(out);
  return out;
}

inline FiniteSpace discrete_space(std::size_t n) {
  std::vector<AtomSet> sub;
  for (AtomIndex i = 0; i < n; ++i)
    sub.push_back(AtomSet::single(i));
  return topology_from_subbase(numbered_points(n), sub);
}

/// Points {0,1} with opens {}, {1}, {0,1}.
inline FiniteSpace sierpinski_space() { return topology_from_subbase(numbered_points(2), {AtomSet::single(1)}); }

/// Every labelled topology on n points, from all subbases, deduplicated by
/// the set of opens. Yields 1, 4, 29, 355 spaces for n = 1..4.
inline std::vector<FiniteSpace> enumerate_topologies(std::size_t n) {
  if (n > 4)
    throw BoundExceeded("topology enumeration beyond 4 points");
  const AtomSet all = AtomSet::first(n);
  std::vector<AtomSet> proper;
  for (std::uint64_t m = 1; m < all.bits(); ++m)
    proper.emplace_back(m);
  std::set<std::vector<AtomSet>> seen;
  std::vector<FiniteSpace> out;
  // Topologies on up to 4 points are generated by subbases of at most 4 sets.
  const std::size_t max_sub = std::min<std::size_t>(proper.size(), 4);
  std::vector<std::size_t> pick;
  auto emit = [&] {
    std::vector<AtomSet> sub;
    for (auto i : pick)
      sub.push_back(proper[i]);
    auto sp = topology_from_subbase(numbered_points(n), sub);
    if (seen.insert(sp.opens).second)
      out.push_back(std::move(sp));
  };
  auto rec = [&](auto&& self, std::size_t start) -> void {
    emit();
    if (pick.size() == max_sub)
      return;
    for (std::size_t i = start; i < proper.size(); ++i) {
      pick.push_back(i);
      self(self, i + 1);
      pick.pop_back();
    }
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end(), [](const FiniteSpace& a, const FiniteSpace& b) {
    if (a.opens.size() != b.opens.size())
      return a.opens.size() < b.opens.size();
    return a.opens < b.opens;
  });
  return out;
}

/// Atoms naming the basis members, e.g. "{0,1}".
inline Universe basis_universe(const FiniteSpace& sp) {
  std::vector<Atom> atoms;
  for (auto b : sp.basis)
    atoms.push_back(Atom{open_set_name(sp.points, b), "open set " + open_set_name(sp.points, b)});
  return Universe(std::move(atoms));
}

inline Universe point_universe(const FiniteSpace& sp) {
  std::vector<Atom> atoms;
  for (const auto& p : sp.points.atoms())
    atoms.push_back(Atom{p.id, "point " + p.id});
  return Universe(std::move(atoms));
}

enum class SelectionKind { T_X, T_X_x, T_X_F, O_X, P_X, Omega_X, F_X, D_X, Omega_X_x, Gamma_X_x };

inline const char* to_string(SelectionKind k) {
  switch (k) {
  case SelectionKind::T_X: return "T_X";
  case SelectionKind::T_X_x: return "T_X_x";
  case SelectionKind::T_X_F: return "T_X_F";
  case SelectionKind::O_X: return "O_X";
  case SelectionKind::P_X: return "P_X";
  case SelectionKind::Omega_X: return "Omega_X";
  case SelectionKind::F_X: return "F_X";
  case SelectionKind::D_X: return "D_X";
  case SelectionKind::Omega_X_x: return "Omega_X_x";
  case SelectionKind::Gamma_X_x: return "Gamma_X_x";
  }
  return "?";
}

inline std::optional<SelectionKind> selection_kind_from_string(const std::string& s) {
  for (auto k : {SelectionKind::T_X, SelectionKind::T_X_x, SelectionKind::T_X_F, SelectionKind::O_X,
                 SelectionKind::P_X, SelectionKind::Omega_X, SelectionKind::F_X, SelectionKind::D_X,
                 SelectionKind::Omega_X_x, SelectionKind::Gamma_X_x})
    if (s == to_string(k))
      return k;
  return std::nullopt;
}

/// Kinds whose atoms are basis members (the rest select points).
inline bool over_basis_atoms(SelectionKind k) {
  return k == SelectionKind::O_X || k == SelectionKind::P_X || k == SelectionKind::Omega_X ||
         k == SelectionKind::F_X;
}

struct SelectionParams {
  std::optional<AtomIndex> point;
  std::optional<AtomSet> finite_set;
  /// Size bound for finite sets (omega covers, F_X); defaults to |X|.
  std::optional<std::size_t> k;
  /// O_X / Omega_X: emit only inclusion-minimal covers.
  bool minimal = false;
  /// F_X: also include the local base at the empty set.
  bool include_empty_finite_set = false;
  std::uint64_t budget = kDefaultBudget;
};

struct SelectionSet {
  Family family;
  bool degenerate = false;
  std::vector<std::string> warnings;
};

namespace detail {

inline std::vector<AtomSet> subsets_up_to(AtomSet all, std::size_t k, bool include_empty) {
  std::vector<AtomSet> out;
  const auto n = all.span();
  for (std::uint64_t m = include_empty ? 0 : 1; m < (std::uint64_t{1} << n); ++m) {
    AtomSet f(m);
    if (f.subset_of(all) && f.size() <= k)
      out.push_back(f);
  }
  return out;
}

/// Basis-atom set of the basis members containing `f`.
inline AtomSet local_base(const FiniteSpace& sp, AtomSet f) {
  AtomSet s;
  for (AtomIndex i = 0; i < sp.basis.size(); ++i)
    if (f.subset_of(sp.basis[i]))
      s.insert(i);
  return s;
}

template <class Keep>
std::vector<AtomSet> basis_subfamilies(const FiniteSpace& sp, std::uint64_t budget, bool minimal, Keep keep) {
  const std::size_t b = sp.basis.size();
  if (b >= 63 || (std::uint64_t{1} << b) > budget)
    throw BoundExceeded("enumerating " + std::to_string(b) + "-member basis subfamilies");
  std::vector<AtomSet> out;
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << b); ++m)
    if (keep(AtomSet(m)))
      out.emplace_back(m);
  if (minimal) {
    std::vector<AtomSet> mins;
    for (auto s : out) {
      bool is_min = true;
      for (auto o : out)
        if (o != s && o.subset_of(s)) {
          is_min = false;
          break;
        }
      if (is_min)
        mins.push_back(s);
    }
    out = std::move(mins);
  }
  return out;
}

inline AtomSet union_of(const FiniteSpace& sp, AtomSet atoms) {
  AtomSet u;
  for (auto i : atoms.indices())
    u |= sp.basis[i];
  return u;
}

} // namespace detail

/// Generates one of the selection sets over the space's chosen basis.
/// Cover-type kinds (O_X, P_X, Omega_X, F_X) are families over basis atoms;
/// the others are families of point sets.
inline SelectionSet gen_selection_set(const FiniteSpace& sp, SelectionKind kind, const SelectionParams& params = {}) {
  SelectionSet out;
  const AtomSet all = sp.all_points();
  const std::size_t n = sp.points.size();
  const std::size_t k = params.k.value_or(n);
  out.family.universe = over_basis_atoms(kind) ? basis_universe(sp) : point_universe(sp);
  auto& members = out.family.members;

  auto need_point = [&]() -> AtomIndex {
    if (!params.point || *params.point >= n)
      throw DomainError(std::string(to_string(kind)) + " requires a point of the space");
    return *params.point;
  };
  auto omega = [&](AtomSet atoms) {
    for (auto f : detail::subsets_up_to(all, k, true)) {
      bool inside = false;
      for (auto i : atoms.indices())
        if (f.subset_of(sp.basis[i])) {
          inside = true;
          break;
        }
      if (!inside)
        return false;
    }
    return true;
  };

  switch (kind) {
  case SelectionKind::T_X:
    members = sp.basis;
    break;
  case SelectionKind::T_X_x: {
    const AtomIndex x = need_point();
    for (auto b : sp.basis)
      if (b.contains(x))
        members.push_back(b);
    break;
  }
  case SelectionKind::T_X_F: {
    if (!params.finite_set || !params.finite_set->subset_of(all))
      throw DomainError("T_X_F requires a finite set of points");
    for (auto b : sp.basis)
      if (params.finite_set->subset_of(b))
        members.push_back(b);
    if (members.empty())
      out.warnings.push_back("no basis member contains " + sp.points.describe(*params.finite_set));
    break;
  }
  case SelectionKind::O_X:
    members = detail::basis_subfamilies(sp, params.budget, params.minimal,
                                        [&](AtomSet s) { return detail::union_of(sp, s) == all; });
    break;
  case SelectionKind::Omega_X:
    members = detail::basis_subfamilies(sp, params.budget, params.minimal, omega);
    break;
  case SelectionKind::P_X:
    for (AtomIndex x = 0; x < n; ++x) {
      auto s = detail::local_base(sp, AtomSet::single(x));
      if (std::find(members.begin(), members.end(), s) == members.end())
        members.push_back(s);
    }
    break;
  case SelectionKind::F_X:
    for (auto f : detail::subsets_up_to(all, k, params.include_empty_finite_set)) {
      auto s = detail::local_base(sp, f);
      if (s.empty())
        throw DomainError("no basis member contains " + sp.points.describe(f) +
                          "; its local finite-base would be empty");
      if (std::find(members.begin(), members.end(), s) == members.end())
        members.push_back(s);
    }
    break;
  case SelectionKind::D_X:
    for (auto y : detail::subsets_up_to(all, n, false))
      if (std::all_of(sp.basis.begin(), sp.basis.end(), [&](AtomSet b) { return b.intersects(y); }))
        members.push_back(y);
    break;
  case SelectionKind::Omega_X_x: {
    const AtomIndex x = need_point();
    for (auto y : detail::subsets_up_to(all, n, false))
      if (std::all_of(sp.basis.begin(), sp.basis.end(),
                      [&](AtomSet b) { return !b.contains(x) || b.intersects(y); }))
        members.push_back(y);
    break;
  }
  case SelectionKind::Gamma_X_x:
    need_point();
    members = detail::subsets_up_to(all, n, false);
    out.degenerate = true;
    out.warnings.emplace_back("converging fans are degenerate on finite spaces: every set qualifies "
                              "(the empty set is omitted since family members must be nonempty)");
    break;
  }
  return out;
}

/// An extensional payoff accepting exactly the family's members.
inline PayoffPredicate extensional_payoff(const Family& f, bool negated = false) {
  return PayoffPredicate::extensional(f.universe.size(), f.members, negated);
}

enum class NamedGame {
  rothberger,
  point_open,
  omega_rothberger,
  omega_finite_open,
  selective_separability,
  point_picking,
  fan_tightness,
  closure_game,
  gruenhage_W,
  gruenhage_W_cluster,
};

inline const char* to_string(NamedGame g) {
  switch (g) {
  case NamedGame::rothberger: return "rothberger";
  case NamedGame::point_open: return "point_open";
  case NamedGame::omega_rothberger: return "omega_rothberger";
  case NamedGame::omega_finite_open: return "omega_finite_open";
  case NamedGame::selective_separability: return "selective_separability";
  case NamedGame::point_picking: return "point_picking";
  case NamedGame::fan_tightness: return "fan_tightness";
  case NamedGame::closure_game: return "closure_game";
  case NamedGame::gruenhage_W: return "gruenhage_W";
  case NamedGame::gruenhage_W_cluster: return "gruenhage_W_cluster";
  }
  return "?";
}

inline std::optional<NamedGame> named_game_from_string(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(NamedGame::gruenhage_W_cluster); ++i)
    if (s == to_string(static_cast<NamedGame>(i)))
      return static_cast<NamedGame>(i);
  return std::nullopt;
}

inline bool needs_point(NamedGame g) {
  return g == NamedGame::fan_tightness || g == NamedGame::closure_game || g == NamedGame::gruenhage_W ||
         g == NamedGame::gruenhage_W_cluster;
}

struct NamedGameResult {
  GameInstance game;
  /// The primal/dual pair the game belongs to; `game` is one of its sides.
  DualityContext duality;
  bool is_dual_side = false;
};

/// Builds a named game together with its dual pair (reflection checked).
inline NamedGameResult named_game(const FiniteSpace& space, NamedGame name, std::size_t horizon,
                                  std::optional<AtomIndex> point = std::nullopt,
                                  std::uint64_t budget = kDefaultBudget) {
  if (needs_point(name) && (!point || *point >= space.points.size()))
    throw DomainError(std::string(to_string(name)) + " requires a point of the space");
  auto sp = std::make_shared<const FiniteSpace>(space);
  SelectionParams params;
  params.point = point;
  params.budget = budget;

  Family primal_family, reflection;
  PayoffPredicate payoff;
  bool dual_side = false;
  switch (name) {
  case NamedGame::point_open:
    dual_side = true;
    [[fallthrough]];
  case NamedGame::rothberger:
    primal_family = gen_selection_set(space, SelectionKind::O_X, params).family;
    reflection = gen_selection_set(space, SelectionKind::P_X, params).family;
    payoff = PayoffPredicate::topological(PayoffKind::cover, sp, primal_family.universe);
    break;
  case NamedGame::omega_finite_open:
    dual_side = true;
    [[fallthrough]];
  case NamedGame::omega_rothberger:
    primal_family = gen_selection_set(space, SelectionKind::Omega_X, params).family;
    reflection = gen_selection_set(space, SelectionKind::F_X, params).family;
    payoff = PayoffPredicate::topological(PayoffKind::omega_cover, sp, primal_family.universe);
    break;
  case NamedGame::point_picking:
    dual_side = true;
    [[fallthrough]];
  case NamedGame::selective_separability:
    primal_family = gen_selection_set(space, SelectionKind::D_X, params).family;
    reflection = gen_selection_set(space, SelectionKind::T_X, params).family;
    payoff = PayoffPredicate::topological(PayoffKind::dense, sp, primal_family.universe);
    break;
  case NamedGame::closure_game:
    dual_side = true;
    [[fallthrough]];
  case NamedGame::fan_tightness:
    primal_family = gen_selection_set(space, SelectionKind::D_X, params).family;
    reflection = gen_selection_set(space, SelectionKind::T_X, params).family;
    payoff = PayoffPredicate::topological(PayoffKind::fan_at_point, sp, primal_family.universe, point);
    break;
  case NamedGame::gruenhage_W:
    dual_side = true;
    primal_family = gen_selection_set(space, SelectionKind::Omega_X_x, params).family;
    reflection = gen_selection_set(space, SelectionKind::T_X_x, params).family;
    payoff = PayoffPredicate::topological(PayoffKind::converging_fan_at_point, sp, primal_family.universe, point);
    break;
  case NamedGame::gruenhage_W_cluster:
    dual_side = true;
    primal_family = gen_selection_set(space, SelectionKind::Omega_X_x, params).family;
    reflection = gen_selection_set(space, SelectionKind::T_X_x, params).family;
    payoff = PayoffPredicate::topological(PayoffKind::fan_at_point, sp, primal_family.universe, point);
    break;
  }
  if (primal_family.members.empty() || reflection.members.empty())
    throw DomainError(std::string(to_string(name)) + ": a selection set is empty over this basis");
  GameInstance primal{primal_family, payoff, horizon};
  auto ctx = make_context(primal, reflection, true, budget);
  GameInstance game = dual_side ? ctx.dual : ctx.primal;
  return NamedGameResult{std::move(game), std::move(ctx), dual_side};
}

struct BasisInvarianceReport {
  Verdicts default_basis;
  Verdicts alternate_basis;
  std::uint64_t nodes = 0;

  bool identical() const noexcept { return default_basis == alternate_basis; }
};

/// Solves the named game over the space's basis and over `alt_basis` and
/// compares all four verdicts.
inline BasisInvarianceReport basis_invariance_check(const FiniteSpace& space, const std::vector<AtomSet>& alt_basis,
                                                    NamedGame name, std::size_t horizon,
                                                    std::optional<AtomIndex> point = std::nullopt,
                                                    const SolverOptions& opts = {}) {
  BasisInvarianceReport rep;
  auto a = named_game(space, name, horizon, point, opts.budget);
  auto b = named_game(with_basis(space, alt_basis), name, horizon, point, opts.budget);
  rep.default_basis = solve_all(a.game, opts, &rep.nodes);
  rep.alternate_basis = solve_all(b.game, opts, &rep.nodes);
  return rep;
}

} // namespace selgame
