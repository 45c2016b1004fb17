#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "selgame/core.hpp"
#include "selgame/json_io.hpp"
#include "selgame/reflection.hpp"
#include "selgame/solver.hpp"
#include "selgame/translate.hpp"

namespace selgame {

struct CorpusConfig {
  std::uint64_t seed = 42;
  /// Reflection mode: number of accepted instance pairs. Falsifier mode:
  /// number of draws.
  std::size_t count = 200;
  std::size_t max_universe = 5;
  std::size_t max_family = 4;
  std::size_t max_member = 3;
  std::size_t max_horizon = 3;
  bool reflection_filter = true;
  std::uint64_t budget = kDefaultBudget;
  /// Counterexample files go here when set.
  std::string out_dir;
};

enum class ProbeOutcome { skipped, error, non_winning, winning };

inline const char* to_string(ProbeOutcome o) {
  switch (o) {
  case ProbeOutcome::skipped: return "skipped";
  case ProbeOutcome::error: return "error";
  case ProbeOutcome::non_winning: return "non_winning";
  case ProbeOutcome::winning: return "winning";
  }
  return "?";
}

struct CorpusEntry {
  std::size_t index = 0;
  GameInstance primal;
  Family reflection;
  DualityReport duality;
  ChainReport chain_primal;
  ChainReport chain_dual;
  std::vector<SoundnessCase> soundness;
  ProbeOutcome t1_forward = ProbeOutcome::skipped;
  ProbeOutcome t1_backward = ProbeOutcome::skipped;
  std::string error;

  bool duality_ok() const { return duality.all_hold(); }
  bool chain_ok() const { return chain_primal.consistent && chain_dual.consistent; }
  bool translations_ok() const {
    for (const auto& c : soundness)
      if (!c.sound())
        return false;
    return true;
  }
  bool subset_only_failure() const { return !duality.reflection.subset_ok && duality.reflection.coinitial_ok; }
  bool coinitial_failure() const { return !duality.reflection.coinitial_ok; }
};

struct CorpusResult {
  CorpusConfig config;
  std::size_t draws = 0;
  std::size_t discarded = 0;
  std::vector<CorpusEntry> entries;
  std::vector<std::string> counterexample_files;
};

/// Deterministic draws from one explicit seed.
class CorpusRng {
public:
  explicit CorpusRng(std::uint64_t seed) : gen_(seed) {}

  std::size_t uniform(std::size_t lo, std::size_t hi) { return lo + static_cast<std::size_t>(gen_() % (hi - lo + 1)); }
  bool coin(unsigned percent) { return gen_() % 100 < percent; }

  AtomSet subset(std::size_t n, std::size_t size) {
    AtomSet s;
    while (s.size() < size)
      s.insert(uniform(0, n - 1));
    return s;
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i)
      std::swap(v[i - 1], v[uniform(0, i - 1)]);
  }

private:
  std::mt19937_64 gen_;
};

namespace detail {

inline Universe letter_universe(std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i)
    ids.emplace_back(1, static_cast<char>('a' + i));
  return Universe::from_ids(ids);
}

inline std::vector<AtomSet> random_members(CorpusRng& rng, std::size_t n, std::size_t count, std::size_t max_member) {
  std::vector<AtomSet> out;
  for (std::size_t tries = 0; out.size() < count && tries < 20 * count; ++tries) {
    auto s = rng.subset(n, rng.uniform(1, std::min(max_member, n)));
    if (std::find(out.begin(), out.end(), s) == out.end())
      out.push_back(s);
  }
  return out;
}

inline PayoffPredicate random_payoff(CorpusRng& rng, std::size_t n) {
  static constexpr unsigned kDensity[] = {20, 50, 80};
  const unsigned density = kDensity[rng.uniform(0, 2)];
  std::vector<AtomSet> sets;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m)
    if (rng.coin(density))
      sets.emplace_back(m);
  return PayoffPredicate::extensional(n, std::move(sets), rng.coin(50));
}

/// Shrinks members of `r` until its choice ranges fit the caps. Returns
/// false when no repair is possible.
inline bool repair_reflection(CorpusRng& rng, Family& r, const CorpusConfig& cfg) {
  for (std::size_t step = 0; step < 32; ++step) {
    auto ranges = choice_ranges(r, cfg.budget);
    bool fits = ranges.size() <= cfg.max_family;
    for (auto s : ranges.members)
      fits = fits && s.size() <= cfg.max_member;
    if (fits)
      return true;
    std::vector<MemberIndex> shrinkable;
    for (MemberIndex i = 0; i < r.size(); ++i)
      if (r[i].size() > 1)
        shrinkable.push_back(i);
    if (shrinkable.empty())
      return false;
    const MemberIndex i = shrinkable[rng.uniform(0, shrinkable.size() - 1)];
    auto atoms = r[i].indices();
    AtomSet smaller = r[i];
    smaller.erase(atoms[rng.uniform(0, atoms.size() - 1)]);
    if (r.contains(smaller))
      r.members.erase(r.members.begin() + static_cast<std::ptrdiff_t>(i));
    else
      r.members[i] = smaller;
  }
  return false;
}

/// Draws (A, R) with R a reflection of A: R first, then A = the choice ranges
/// of R plus optional supersets meeting every member of R.
inline bool draw_reflection_pair(CorpusRng& rng, const CorpusConfig& cfg, std::size_t n, Family& a, Family& r) {
  const Universe u = letter_universe(n);
  r = Family{u, random_members(rng, n, rng.uniform(1, cfg.max_family), cfg.max_member)};
  if (!repair_reflection(rng, r, cfg))
    return false;
  a = choice_ranges(r, cfg.budget);
  for (std::size_t slot = a.size(); slot < cfg.max_family; ++slot) {
    if (!rng.coin(50))
      continue;
    auto s = rng.subset(n, rng.uniform(1, std::min(cfg.max_member, n)));
    bool meets = std::all_of(r.members.begin(), r.members.end(), [&](AtomSet m) { return m.intersects(s); });
    if (meets && !a.contains(s))
      a.members.push_back(s);
  }
  rng.shuffle(a.members);
  rng.shuffle(r.members);
  return is_reflection(r, a, cfg.budget).holds();
}

inline ProbeOutcome probe(const DualityContext& ctx, Theorem t, Direction d, const Strategy& s, std::uint64_t budget) {
  try {
    auto tr = translate(t, d, ctx, s);
    return verify_strategy(target_game(ctx, d), tr.strategy, budget).winning ? ProbeOutcome::winning
                                                                              : ProbeOutcome::non_winning;
  } catch (const TranslationError&) {
    return ProbeOutcome::error;
  }
}

inline void run_falsifier_probes(CorpusEntry& e, const CorpusConfig& cfg) {
  SolverOptions opts{cfg.budget};
  auto ctx = make_context(e.primal, e.reflection, false, cfg.budget);
  // t1 forward reads a predetermined strategy for I in the primal game.
  std::optional<Strategy> fwd;
  if (auto rep = solve(ctx.primal, Relation::I_pre, opts); rep.holds)
    fwd = rep.witness;
  else if (e.duality.reflection.coinitial_witness)
    fwd = PredeterminedStrategyI{
      std::vector<MemberIndex>(ctx.primal.horizon, e.duality.reflection.coinitial_witness->second)};
  if (fwd)
    e.t1_forward = probe(ctx, Theorem::t1, Direction::forward, *fwd, cfg.budget);
  if (auto rep = solve(ctx.dual, Relation::II_markov, opts); rep.holds)
    e.t1_backward = probe(ctx, Theorem::t1, Direction::backward, *rep.witness, cfg.budget);
}

inline io::json entry_to_json(const CorpusEntry& e) {
  io::json out;
  out["index"] = e.index;
  out["primal"] = io::to_json(e.primal);
  out["reflection"] = io::sets_to_json(e.reflection.universe, e.reflection.members);
  out["duality"] = io::to_json(e.duality, e.reflection, e.primal.family);
  out["chain_consistent"] = e.chain_ok();
  io::json sound = io::json::array();
  for (const auto& c : e.soundness)
    sound.push_back({{"theorem", to_string(c.theorem)},
                     {"direction", to_string(c.direction)},
                     {"source_holds", c.source_holds},
                     {"translated", c.translated},
                     {"winning", c.winning},
                     {"error", c.error}});
  out["translations"] = std::move(sound);
  out["t1_forward_probe"] = to_string(e.t1_forward);
  out["t1_backward_probe"] = to_string(e.t1_backward);
  if (!e.error.empty())
    out["error"] = e.error;
  return out;
}

inline std::string verdict_bits(const Verdicts& v) {
  std::string s;
  for (auto r : kAllRelations)
    s += v.get(r) ? '1' : '0';
  return s;
}

} // namespace detail

/// Runs the corpus. Everything is a function of the config; identical
/// configs give identical results.
inline CorpusResult run_corpus(const CorpusConfig& cfg) {
  CorpusResult res;
  res.config = cfg;
  CorpusRng rng(cfg.seed);
  const SolverOptions opts{cfg.budget};
  const std::size_t max_draws = cfg.reflection_filter ? cfg.count * 50 : cfg.count;
  while (res.entries.size() < cfg.count && res.draws < max_draws) {
    ++res.draws;
    const std::size_t n = rng.uniform(2, cfg.max_universe);
    Family a, r;
    if (cfg.reflection_filter) {
      if (!detail::draw_reflection_pair(rng, cfg, n, a, r)) {
        ++res.discarded;
        continue;
      }
    } else {
      const Universe u = detail::letter_universe(n);
      a = Family{u, detail::random_members(rng, n, rng.uniform(1, cfg.max_family), cfg.max_member)};
      r = Family{u, detail::random_members(rng, n, rng.uniform(1, cfg.max_family), cfg.max_member)};
    }
    CorpusEntry e;
    e.index = res.entries.size();
    e.reflection = r;
    e.primal = GameInstance{a, detail::random_payoff(rng, n), rng.uniform(1, cfg.max_horizon)};
    try {
      e.duality = verify_duality(e.primal, r, opts, false);
      e.chain_primal = check_chain(e.duality.primal);
      e.chain_dual = check_chain(e.duality.dual);
      if (cfg.reflection_filter)
        e.soundness = translation_soundness(make_context(e.primal, r, true, cfg.budget), opts);
      else
        detail::run_falsifier_probes(e, cfg);
    } catch (const std::exception& ex) {
      e.error = ex.what();
    }
    res.entries.push_back(std::move(e));
  }

  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    for (const auto& e : res.entries) {
      const bool failed = cfg.reflection_filter ? !(e.duality_ok() && e.chain_ok() && e.translations_ok() && e.error.empty())
                                                : (!e.duality_ok() || !e.error.empty());
      if (!failed)
        continue;
      const std::string name = (cfg.reflection_filter ? "counterexample_" : "negative_") + std::to_string(e.index) + ".json";
      std::ofstream(std::filesystem::path(cfg.out_dir) / name) << detail::entry_to_json(e).dump(2) << "\n";
      res.counterexample_files.push_back(name);
    }
  }
  return res;
}

/// Summary with counts and one compact line per entry. Contains no timing,
/// so reruns with the same config are byte-identical.
inline io::json summary_to_json(const CorpusResult& res) {
  const auto& cfg = res.config;
  io::json out;
  out["mode"] = cfg.reflection_filter ? "reflection" : "falsifier";
  out["seed"] = cfg.seed;
  out["caps"] = {{"universe", cfg.max_universe},
                 {"family", cfg.max_family},
                 {"member", cfg.max_member},
                 {"horizon", cfg.max_horizon}};
  out["draws"] = res.draws;
  out["accepted"] = res.entries.size();
  out["discarded"] = res.discarded;
  std::size_t dual_pass = 0, chain_pass = 0, errors = 0, checked = 0, sound = 0;
  std::size_t reflections = 0;
  std::vector<std::size_t> subset_fixtures, coinitial_fixtures;
  for (const auto& e : res.entries) {
    dual_pass += e.duality_ok();
    chain_pass += e.chain_ok();
    errors += !e.error.empty();
    reflections += e.duality.reflection.holds();
    for (const auto& c : e.soundness)
      if (c.source_holds) {
        ++checked;
        sound += c.sound();
      }
    if (e.subset_only_failure() &&
        (e.t1_backward == ProbeOutcome::error || e.t1_backward == ProbeOutcome::non_winning))
      subset_fixtures.push_back(e.index);
    if (e.coinitial_failure() && e.t1_forward == ProbeOutcome::error)
      coinitial_fixtures.push_back(e.index);
  }
  const std::size_t total = res.entries.size();
  out["reflections"] = reflections;
  out["duality"] = {{"pass", dual_pass}, {"fail", total - dual_pass}};
  out["chain"] = {{"pass", chain_pass}, {"fail", total - chain_pass}};
  out["translations"] = {{"checked", checked}, {"sound", sound}, {"unsound", checked - sound}};
  out["errors"] = errors;
  if (!cfg.reflection_filter)
    out["falsifier"] = {{"subset_only_t1_backward", subset_fixtures}, {"coinitial_t1_forward", coinitial_fixtures}};
  out["counterexamples"] = res.counterexample_files;
  io::json entries = io::json::array();
  for (const auto& e : res.entries) {
    io::json line;
    line["index"] = e.index;
    line["universe"] = e.primal.universe().size();
    line["family"] = e.primal.family.size();
    line["reflection"] = e.reflection.size();
    line["horizon"] = e.primal.horizon;
    line["is_reflection"] = e.duality.reflection.holds();
    line["primal"] = detail::verdict_bits(e.duality.primal);
    line["dual"] = detail::verdict_bits(e.duality.dual);
    line["duality"] = e.duality_ok();
    line["chain"] = e.chain_ok();
    if (cfg.reflection_filter)
      line["translations"] = e.translations_ok();
    else
      line["t1_probes"] = std::string(to_string(e.t1_forward)) + "/" + to_string(e.t1_backward);
    entries.push_back(std::move(line));
  }
  out["entries"] = std::move(entries);
  return out;
}

inline io::json entry_json(const CorpusEntry& e) { return detail::entry_to_json(e); }

} // namespace selgame
