#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "selgame/errors.hpp"

namespace selgame {

using AtomIndex = std::size_t;
using MemberIndex = std::size_t;

/// Universes are capped so that an AtomSet fits in one machine word.
inline constexpr std::size_t kMaxAtoms = 64;

/// A finite set of atom indices drawn from one universe, stored as a bitmask.
class AtomSet {
public:
  constexpr AtomSet() = default;
  constexpr explicit AtomSet(std::uint64_t bits) : bits_(bits) {}

  static AtomSet of(std::initializer_list<AtomIndex> indices) {
    AtomSet s;
    for (auto i : indices)
      s.insert(i);
    return s;
  }

  static constexpr AtomSet single(AtomIndex i) { return AtomSet(std::uint64_t{1} << i); }

  static constexpr AtomSet first(std::size_t n) {
    return n >= 64 ? AtomSet(~std::uint64_t{0}) : AtomSet((std::uint64_t{1} << n) - 1);
  }

  constexpr std::uint64_t bits() const noexcept { return bits_; }
  constexpr bool empty() const noexcept { return bits_ == 0; }
  constexpr std::size_t size() const noexcept { return static_cast<std::size_t>(std::popcount(bits_)); }

  constexpr bool contains(AtomIndex i) const noexcept {
    return i < 64 && ((bits_ >> i) & 1U) != 0;
  }
  constexpr void insert(AtomIndex i) noexcept { bits_ |= std::uint64_t{1} << i; }
  constexpr void erase(AtomIndex i) noexcept { bits_ &= ~(std::uint64_t{1} << i); }
  constexpr AtomSet with(AtomIndex i) const noexcept { return AtomSet(bits_ | (std::uint64_t{1} << i)); }

  constexpr bool subset_of(AtomSet o) const noexcept { return (bits_ & ~o.bits_) == 0; }
  constexpr bool intersects(AtomSet o) const noexcept { return (bits_ & o.bits_) != 0; }

  /// Least member; the set must be nonempty.
  constexpr AtomIndex min() const noexcept { return static_cast<AtomIndex>(std::countr_zero(bits_)); }
  /// One past the greatest member (0 for the empty set).
  constexpr std::size_t span() const noexcept { return 64 - static_cast<std::size_t>(std::countl_zero(bits_)); }

  std::vector<AtomIndex> indices() const {
    std::vector<AtomIndex> out;
    out.reserve(size());
    for (auto b = bits_; b != 0; b &= b - 1)
      out.push_back(static_cast<AtomIndex>(std::countr_zero(b)));
    return out;
  }

  friend constexpr AtomSet operator|(AtomSet a, AtomSet b) noexcept { return AtomSet(a.bits_ | b.bits_); }
  friend constexpr AtomSet operator&(AtomSet a, AtomSet b) noexcept { return AtomSet(a.bits_ & b.bits_); }
  friend constexpr AtomSet operator-(AtomSet a, AtomSet b) noexcept { return AtomSet(a.bits_ & ~b.bits_); }
  constexpr AtomSet& operator|=(AtomSet o) noexcept { bits_ |= o.bits_; return *this; }

  friend constexpr bool operator==(AtomSet, AtomSet) = default;
  friend constexpr auto operator<=>(AtomSet a, AtomSet b) noexcept { return a.bits_ <=> b.bits_; }

private:
  std::uint64_t bits_ = 0;
};

struct AtomSetHash {
  std::size_t operator()(AtomSet s) const noexcept { return std::hash<std::uint64_t>{}(s.bits()); }
};

struct Atom {
  std::string id;
  std::string meaning;

  friend bool operator==(const Atom& a, const Atom& b) { return a.id == b.id; }
};

/// The declared, ordered universe of atoms. Atom order is the tie-breaking
/// order used everywhere a "least" atom is chosen.
class Universe {
public:
  Universe() = default;

  explicit Universe(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.size() > kMaxAtoms)
      throw DomainError("universe has " + std::to_string(atoms_.size()) + " atoms; at most 64 supported");
  }

  static Universe from_ids(const std::vector<std::string>& ids) {
    std::vector<Atom> atoms;
    atoms.reserve(ids.size());
    for (const auto& id : ids)
      atoms.push_back(Atom{id, {}});
    return Universe(std::move(atoms));
  }

  std::size_t size() const noexcept { return atoms_.size(); }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  const Atom& operator[](AtomIndex i) const { return atoms_.at(i); }
  AtomSet full() const noexcept { return AtomSet::first(atoms_.size()); }

  std::optional<AtomIndex> index_of(const std::string& id) const {
    for (AtomIndex i = 0; i < atoms_.size(); ++i)
      if (atoms_[i].id == id)
        return i;
    return std::nullopt;
  }

  std::vector<std::string> ids() const {
    std::vector<std::string> out;
    out.reserve(atoms_.size());
    for (const auto& a : atoms_)
      out.push_back(a.id);
    return out;
  }

  /// "{a,b}" in universe order; atoms past the universe print as "#i".
  std::string describe(AtomSet s) const {
    std::string out = "{";
    bool first = true;
    for (auto i : s.indices()) {
      if (!first)
        out += ',';
      first = false;
      out += i < atoms_.size() ? atoms_[i].id : "#" + std::to_string(i);
    }
    return out + "}";
  }

  friend bool operator==(const Universe& a, const Universe& b) { return a.atoms_ == b.atoms_; }

private:
  std::vector<Atom> atoms_;
};

/// A finite list of nonempty AtomSets over a universe. Order matters only for
/// deterministic tie-breaking.
struct Family {
  Universe universe;
  std::vector<AtomSet> members;

  std::size_t size() const noexcept { return members.size(); }
  const AtomSet& operator[](MemberIndex i) const { return members.at(i); }

  std::optional<MemberIndex> index_of(AtomSet s) const {
    auto it = std::find(members.begin(), members.end(), s);
    if (it == members.end())
      return std::nullopt;
    return static_cast<MemberIndex>(it - members.begin());
  }

  bool contains(AtomSet s) const { return index_of(s).has_value(); }

  AtomSet support() const {
    AtomSet u;
    for (auto m : members)
      u |= m;
    return u;
  }

  /// Indices of members that have no proper subset in the family.
  std::vector<MemberIndex> minimal_indices() const {
    std::vector<MemberIndex> out;
    for (MemberIndex i = 0; i < members.size(); ++i) {
      bool minimal = true;
      for (MemberIndex j = 0; j < members.size() && minimal; ++j)
        if (members[j] != members[i] && members[j].subset_of(members[i]))
          minimal = false;
      if (minimal)
        out.push_back(i);
    }
    return out;
  }
};

/// Family equality ignores member order.
inline bool same_members(const Family& a, const Family& b) {
  if (!(a.universe == b.universe))
    return false;
  auto x = a.members, y = b.members;
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());
  y.erase(std::unique(y.begin(), y.end()), y.end());
  return x == y;
}

/// A finite topological space. Points, opens and basis members are AtomSets
/// over the point universe.
struct FiniteSpace {
  Universe points;
  std::vector<AtomSet> subbase;
  std::vector<AtomSet> opens;
  std::vector<AtomSet> basis;
  bool basis_is_all = true;

  AtomSet all_points() const noexcept { return points.full(); }
};

/// Canonical atom id for an open set used as an atom: "{0,1}".
inline std::string open_set_name(const Universe& points, AtomSet open) { return points.describe(open); }

enum class PayoffKind { extensional, cover, omega_cover, dense, fan_at_point, converging_fan_at_point };

inline const char* to_string(PayoffKind k) {
  switch (k) {
  case PayoffKind::extensional: return "extensional";
  case PayoffKind::cover: return "cover";
  case PayoffKind::omega_cover: return "omega_cover";
  case PayoffKind::dense: return "dense";
  case PayoffKind::fan_at_point: return "fan_at_point";
  case PayoffKind::converging_fan_at_point: return "converging_fan_at_point";
  }
  return "?";
}

inline std::optional<PayoffKind> payoff_kind_from_string(const std::string& s) {
  for (auto k : {PayoffKind::extensional, PayoffKind::cover, PayoffKind::omega_cover, PayoffKind::dense,
                 PayoffKind::fan_at_point, PayoffKind::converging_fan_at_point})
    if (s == to_string(k))
      return k;
  return std::nullopt;
}

inline bool is_cover_kind(PayoffKind k) { return k == PayoffKind::cover || k == PayoffKind::omega_cover; }

/// The winning family for player II, possibly negated. Extensional payoffs
/// list their sets; topological payoffs interpret each universe atom as a
/// set of points (an open for cover kinds, a single point otherwise).
class PayoffPredicate {
public:
  PayoffPredicate() = default;

  static PayoffPredicate extensional(std::size_t universe_size, std::vector<AtomSet> sets, bool negated = false) {
    PayoffPredicate p;
    p.kind_ = PayoffKind::extensional;
    p.universe_size_ = universe_size;
    p.negated_ = negated;
    std::sort(sets.begin(), sets.end());
    sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
    p.sets_ = std::move(sets);
    return p;
  }

  static PayoffPredicate topological(PayoffKind kind, std::shared_ptr<const FiniteSpace> space,
                                     const Universe& universe, std::optional<AtomIndex> point = std::nullopt,
                                     bool negated = false, std::optional<std::size_t> omega_k = std::nullopt) {
    if (kind == PayoffKind::extensional)
      throw DomainError("topological payoff requires a topological kind");
    if (!space)
      throw DomainError("topological payoff requires a space");
    bool needs_point = kind == PayoffKind::fan_at_point || kind == PayoffKind::converging_fan_at_point;
    if (needs_point && (!point || *point >= space->points.size()))
      throw DomainError(std::string("payoff kind ") + to_string(kind) + " requires a point of the space");
    PayoffPredicate p;
    p.kind_ = kind;
    p.universe_size_ = universe.size();
    p.negated_ = negated;
    p.space_ = std::move(space);
    p.point_ = needs_point ? point : std::nullopt;
    p.omega_k_ = omega_k;
    p.atom_points_.assign(universe.size(), AtomSet{});
    p.resolved_.assign(universe.size(), false);
    for (AtomIndex a = 0; a < universe.size(); ++a) {
      const auto& id = universe[a].id;
      if (is_cover_kind(kind)) {
        for (auto open : p.space_->opens)
          if (!open.empty() && open_set_name(p.space_->points, open) == id) {
            p.atom_points_[a] = open;
            p.resolved_[a] = true;
          }
      } else if (auto idx = p.space_->points.index_of(id)) {
        p.atom_points_[a] = AtomSet::single(*idx);
        p.resolved_[a] = true;
      }
    }
    return p;
  }

  PayoffKind kind() const noexcept { return kind_; }
  bool negated() const noexcept { return negated_; }
  std::size_t universe_size() const noexcept { return universe_size_; }
  const std::vector<AtomSet>& sets() const noexcept { return sets_; }
  const std::shared_ptr<const FiniteSpace>& space() const noexcept { return space_; }
  std::optional<AtomIndex> point() const noexcept { return point_; }
  std::optional<std::size_t> omega_k() const noexcept { return omega_k_; }

  /// Converging fans are vacuous on finite spaces: every set qualifies.
  bool degenerate() const noexcept { return kind_ == PayoffKind::converging_fan_at_point; }

  /// Universe atoms the topological payoff cannot interpret.
  std::vector<AtomIndex> unresolved_atoms() const {
    std::vector<AtomIndex> out;
    for (AtomIndex a = 0; a < resolved_.size(); ++a)
      if (!resolved_[a])
        out.push_back(a);
    return out;
  }

  PayoffPredicate negate() const {
    PayoffPredicate p = *this;
    p.negated_ = !negated_;
    return p;
  }

  bool eval(AtomSet s) const {
    if (!s.subset_of(AtomSet::first(universe_size_)))
      throw DomainError("atom outside universe in payoff argument");
    return eval_positive(s) != negated_;
  }

private:
  bool eval_positive(AtomSet s) const {
    if (kind_ == PayoffKind::extensional)
      return std::binary_search(sets_.begin(), sets_.end(), s);

    auto picked = s.indices();
    for (auto a : picked)
      if (!resolved_[a])
        throw DomainError("payoff cannot interpret atom #" + std::to_string(a));
    AtomSet covered;
    for (auto a : picked)
      covered |= atom_points_[a];
    const AtomSet all = space_->all_points();

    switch (kind_) {
    case PayoffKind::cover:
      return covered == all;
    case PayoffKind::omega_cover: {
      if (picked.empty())
        return false;
      std::size_t n = space_->points.size();
      std::size_t k = omega_k_.value_or(n);
      if (k >= n) {
        for (auto a : picked)
          if (atom_points_[a] == all)
            return true;
        return false;
      }
      if (n > 24)
        throw BoundExceeded("omega-cover check over " + std::to_string(n) + " points with k < |X|");
      for (std::uint64_t f = 1; f < (std::uint64_t{1} << n); ++f) {
        AtomSet fs(f);
        if (fs.size() > k)
          continue;
        bool inside = false;
        for (auto a : picked)
          if (fs.subset_of(atom_points_[a])) {
            inside = true;
            break;
          }
        if (!inside)
          return false;
      }
      return true;
    }
    case PayoffKind::dense:
      for (auto b : space_->basis)
        if (!b.intersects(covered))
          return false;
      return true;
    case PayoffKind::fan_at_point:
      for (auto b : space_->basis)
        if (b.contains(*point_) && !b.intersects(covered))
          return false;
      return true;
    case PayoffKind::converging_fan_at_point:
      return true;
    case PayoffKind::extensional:
      break;
    }
    return false;
  }

  PayoffKind kind_ = PayoffKind::extensional;
  std::size_t universe_size_ = 0;
  bool negated_ = false;
  std::vector<AtomSet> sets_;
  std::shared_ptr<const FiniteSpace> space_;
  std::optional<AtomIndex> point_;
  std::optional<std::size_t> omega_k_;
  std::vector<AtomSet> atom_points_;
  std::vector<bool> resolved_;
};

inline bool eval_payoff(const PayoffPredicate& p, AtomSet s) { return p.eval(s); }

/// A finite-horizon selection game: player I picks members of the family,
/// player II picks an atom from each, and II wins iff the payoff accepts the
/// set of picks after `horizon` rounds.
struct GameInstance {
  Family family;
  PayoffPredicate payoff;
  std::size_t horizon = 1;

  const Universe& universe() const noexcept { return family.universe; }
};

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const noexcept { return violations.empty(); }
};

inline ValidationReport validate_instance(const GameInstance& g) {
  ValidationReport r;
  const auto& u = g.universe();
  for (AtomIndex i = 0; i < u.size(); ++i) {
    if (u[i].id.find('/') != std::string::npos)
      r.violations.push_back("atom id contains '/': " + u[i].id);
    for (AtomIndex j = 0; j < i; ++j)
      if (u[i].id == u[j].id)
        r.violations.push_back("duplicate atom id: " + u[i].id);
  }
  if (g.family.members.empty())
    r.violations.push_back("empty family");
  const AtomSet full = u.full();
  for (MemberIndex i = 0; i < g.family.size(); ++i) {
    const auto m = g.family[i];
    if (m.empty())
      r.violations.push_back("empty family member: index " + std::to_string(i));
    if (!m.subset_of(full))
      r.violations.push_back("atom outside universe: member " + std::to_string(i) + " " + u.describe(m - full));
    for (MemberIndex j = 0; j < i; ++j)
      if (g.family[j] == m)
        r.violations.push_back("duplicate family member: index " + std::to_string(i) + " repeats " +
                               std::to_string(j));
  }
  const auto& p = g.payoff;
  if (p.universe_size() != u.size())
    r.violations.push_back("non-total payoff: bound to a universe of " + std::to_string(p.universe_size()) +
                           " atoms");
  for (auto s : p.sets())
    if (!s.subset_of(full))
      r.violations.push_back("atom outside universe: payoff set " + u.describe(s - full));
  for (auto a : p.unresolved_atoms())
    r.violations.push_back("non-total payoff: cannot interpret atom " + (a < u.size() ? u[a].id : std::to_string(a)));
  if (g.horizon < 1)
    r.violations.push_back("horizon must be at least 1");
  return r;
}

} // namespace selgame
