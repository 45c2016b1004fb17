// selgame: command-line front end for finite selection games.
//
// Exit codes: 0 = ok / relation holds, 1 = relation fails / check failed,
// 2 = error (parse, validation, budget, reflection hypothesis).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "selgame/corpus.hpp"
#include "selgame/json_io.hpp"
#include "selgame/selgame.hpp"

using namespace selgame;
using io::json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Globals {
  std::uint64_t budget = kDefaultBudget;
  std::uint64_t seed = 42;
  std::string out_dir;
  bool pretty = false;
  std::vector<std::string> inputs;
};

std::string fnv1a_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::uint64_t h = 1469598103934665603ULL;
  char c;
  while (in.get(c))
    h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ULL;
  std::ostringstream ss;
  ss << std::hex << std::setw(16) << std::setfill('0') << h;
  return ss.str();
}

json manifest(const Globals& g, const std::string& command) {
  json m;
  m["command"] = command;
  json inputs = json::object();
  for (const auto& p : g.inputs)
    inputs[p] = fnv1a_file(p);
  m["inputs"] = std::move(inputs);
  m["seed"] = g.seed;
  m["budget"] = g.budget;
  m["version"] = kVersion;
  return m;
}

void emit(const Globals& g, const std::string& command, const json& out, const std::string& table = {}) {
  if (g.pretty && !table.empty())
    std::cout << table;
  else
    std::cout << io::dump(out, g.pretty) << "\n";
  if (!g.out_dir.empty()) {
    std::filesystem::create_directories(g.out_dir);
    std::ofstream(std::filesystem::path(g.out_dir) / (command + ".json")) << out.dump(2) << "\n";
    std::ofstream(std::filesystem::path(g.out_dir) / "manifest.json") << manifest(g, command).dump(2) << "\n";
  }
}

GameInstance load_instance(Globals& g, const std::string& path) {
  g.inputs.push_back(path);
  auto inst = io::instance_from_json(io::read_file(path), path);
  auto rep = validate_instance(inst);
  if (!rep.ok()) {
    std::string msg = path + ": invalid instance";
    for (const auto& v : rep.violations)
      msg += "\n  " + v;
    throw ParseError(msg);
  }
  return inst;
}

Family load_family(Globals& g, const std::string& path, const Universe* fallback) {
  g.inputs.push_back(path);
  return io::family_from_json(io::read_file(path), fallback, path);
}

std::string yn(bool b) { return b ? "yes" : "no"; }

std::string verdict_table(const Verdicts& v, const std::string& label) {
  std::ostringstream ss;
  ss << label << "\n";
  for (auto r : kAllRelations)
    ss << "  " << std::left << std::setw(10) << to_string(r) << (v.get(r) ? "holds" : "fails") << "\n";
  return ss.str();
}

FiniteSpace load_space(Globals& g, const std::string& path) {
  g.inputs.push_back(path);
  return io::space_from_json(io::read_file(path), path);
}

AtomSet parse_point_set(const FiniteSpace& sp, const std::string& csv) {
  AtomSet s;
  for (const auto& id : io::split(csv, ',')) {
    auto i = sp.points.index_of(id);
    if (!i)
      throw DomainError("unknown point '" + id + "'");
    s.insert(*i);
  }
  return s;
}

std::optional<AtomIndex> parse_point(const FiniteSpace& sp, const std::string& id) {
  if (id.empty())
    return std::nullopt;
  auto i = sp.points.index_of(id);
  if (!i)
    throw DomainError("unknown point '" + id + "'");
  return i;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-horizon selection games: solve, check reflections, dualize, translate strategies"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--budget", g.budget, "Node budget for searches and enumerations")->capture_default_str();
  app.add_option("--seed", g.seed, "Seed for the random corpus")->capture_default_str();
  app.add_option("--out", g.out_dir, "Directory for output files");
  app.add_flag("--pretty", g.pretty, "Human-readable output");
  app.set_version_flag("--version", kVersion);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate selection sets or named games from a finite space");
  std::string gen_space, gen_kind, gen_game, gen_point, gen_fset;
  std::size_t gen_horizon = 1, gen_k = 0;
  bool gen_minimal = false, gen_empty_f = false, gen_as_payoff = false, gen_context = false;
  gen->add_option("--space", gen_space, "FiniteSpace JSON file")->required();
  auto* kind_opt = gen->add_option("--kind", gen_kind, "Selection set: T_X T_X_x T_X_F O_X P_X Omega_X F_X D_X Omega_X_x Gamma_X_x");
  auto* game_opt = gen->add_option("--game", gen_game, "Named game, e.g. rothberger, point_open, point_picking");
  kind_opt->excludes(game_opt);
  gen->add_option("--point", gen_point, "Point id for local kinds and pointed games");
  gen->add_option("--finite-set", gen_fset, "Comma-separated points for T_X_F");
  gen->add_option("--k", gen_k, "Size bound for finite sets (default: all points)");
  gen->add_option("--horizon", gen_horizon, "Rounds for named games")->capture_default_str();
  gen->add_flag("--minimal", gen_minimal, "O_X/Omega_X: only inclusion-minimal covers");
  gen->add_flag("--include-empty-finite-set", gen_empty_f, "F_X: include the base at the empty set");
  gen->add_flag("--as-payoff", gen_as_payoff, "Emit the selection set as an extensional payoff");
  gen->add_flag("--context", gen_context, "Named games: emit the primal/reflection context");

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Decide one win relation");
  std::string solve_file, solve_rel;
  bool solve_exhaustive = false, solve_no_memo = false;
  solve_cmd->add_option("instance", solve_file, "Instance JSON")->required();
  solve_cmd->add_option("--relation", solve_rel, "I_full | I_pre | II_full | II_markov")->required();
  solve_cmd->add_flag("--exhaustive", solve_exhaustive, "Enumerate every predetermined/Markov table");
  solve_cmd->add_flag("--no-memo", solve_no_memo, "Disable the state cache");

  // reflect
  auto* reflect = app.add_subcommand("reflect", "Check whether a family is a reflection of another");
  std::string refl_target, refl_instance, refl_family;
  reflect->add_option("--family", refl_target, "Target family JSON");
  reflect->add_option("--instance", refl_instance, "Instance whose family is the target");
  reflect->add_option("--reflection", refl_family, "Candidate reflection JSON")->required();

  // dualize
  auto* dualize_cmd = app.add_subcommand("dualize", "Build the dual game over a reflection");
  std::string dual_file, dual_refl;
  bool dual_unchecked = false;
  dualize_cmd->add_option("instance", dual_file, "Primal instance JSON")->required();
  dualize_cmd->add_option("--reflection", dual_refl, "Reflection family JSON")->required();
  dualize_cmd->add_flag("--unchecked", dual_unchecked, "Do not require the reflection hypothesis");

  // translate
  auto* tr_cmd = app.add_subcommand("translate", "Translate a strategy across a dual pair");
  std::string tr_theorem, tr_dir, tr_ctx, tr_strategy;
  bool tr_unchecked = false;
  tr_cmd->add_option("--theorem", tr_theorem, "t1 | t2 | t3 | t4")->required();
  tr_cmd->add_option("--direction", tr_dir, "forward | backward")->required();
  tr_cmd->add_option("--context", tr_ctx, "Context JSON {primal, reflection}")->required();
  tr_cmd->add_option("--strategy", tr_strategy, "Strategy JSON")->required();
  tr_cmd->add_flag("--unchecked", tr_unchecked, "Translate even if the reflection hypothesis fails");

  // verify-duality
  auto* vd = app.add_subcommand("verify-duality", "Solve both games and compare the four dual relations");
  std::string vd_file, vd_refl;
  vd->add_option("instance", vd_file, "Primal instance JSON")->required();
  vd->add_option("--reflection", vd_refl, "Reflection family JSON")->required();

  // corpus
  auto* corpus = app.add_subcommand("corpus", "Random duality and translation-soundness corpus");
  CorpusConfig cfg;
  bool no_filter = false;
  corpus->add_option("--count", cfg.count, "Entries to produce")->capture_default_str();
  corpus->add_option("--max-universe", cfg.max_universe)->capture_default_str();
  corpus->add_option("--max-family", cfg.max_family)->capture_default_str();
  corpus->add_option("--max-member", cfg.max_member)->capture_default_str();
  corpus->add_option("--max-horizon", cfg.max_horizon)->capture_default_str();
  corpus->add_flag("--no-reflection-filter", no_filter, "Falsifier mode: keep non-reflection pairs");

  // chain-check
  auto* chain = app.add_subcommand("chain-check", "Solve all four relations and check the implication chain");
  std::string chain_file;
  chain->add_option("instance", chain_file, "Instance JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  const SolverOptions opts{g.budget, !solve_no_memo, solve_exhaustive};

  try {
    if (*gen) {
      FiniteSpace sp = load_space(g, gen_space);
      auto point = parse_point(sp, gen_point);
      if (!gen_kind.empty()) {
        auto kind = selection_kind_from_string(gen_kind);
        if (!kind)
          throw ParseError("--kind: unknown selection set '" + gen_kind + "'");
        SelectionParams params;
        params.point = point;
        if (!gen_fset.empty())
          params.finite_set = parse_point_set(sp, gen_fset);
        if (gen_k)
          params.k = gen_k;
        params.minimal = gen_minimal;
        params.include_empty_finite_set = gen_empty_f;
        params.budget = g.budget;
        auto sel = gen_selection_set(sp, *kind, params);
        for (const auto& w : sel.warnings)
          std::cerr << "warning: " << w << "\n";
        json out = gen_as_payoff ? io::to_json(extensional_payoff(sel.family), sel.family.universe)
                                 : io::to_json(sel.family);
        if (!gen_as_payoff) {
          out["kind"] = to_string(*kind);
          out["degenerate"] = sel.degenerate;
          out["warnings"] = sel.warnings;
        }
        emit(g, "gen", out);
        return 0;
      }
      if (gen_game.empty())
        throw ParseError("gen: one of --kind or --game is required");
      auto name = named_game_from_string(gen_game);
      if (!name)
        throw ParseError("--game: unknown game '" + gen_game + "'");
      auto res = named_game(sp, *name, gen_horizon, point, g.budget);
      emit(g, "gen", gen_context ? io::to_json(res.duality) : io::to_json(res.game));
      return 0;
    }

    if (*solve_cmd) {
      auto inst = load_instance(g, solve_file);
      auto rel = relation_from_string(solve_rel);
      if (!rel)
        throw ParseError("--relation: unknown relation '" + solve_rel + "'");
      try {
        auto rep = solve(inst, *rel, opts);
        std::ostringstream t;
        t << to_string(*rel) << ": " << (rep.holds ? "holds" : "fails") << " (" << rep.nodes << " nodes)\n";
        emit(g, "solve", io::to_json(rep, inst), t.str());
        return rep.holds ? 0 : 1;
      } catch (const BoundExceeded& e) {
        SolveReport rep;
        rep.relation = *rel;
        rep.bound_hit = true;
        rep.nodes = g.budget;
        emit(g, "solve", io::to_json(rep, inst));
        std::cerr << "error: " << e.what() << "\n";
        return 2;
      }
    }

    if (*reflect) {
      Family target;
      if (!refl_instance.empty())
        target = load_instance(g, refl_instance).family;
      else if (!refl_target.empty())
        target = load_family(g, refl_target, nullptr);
      else
        throw ParseError("reflect: one of --family or --instance is required");
      Family r = load_family(g, refl_family, &target.universe);
      auto rep = is_reflection(r, target, g.budget);
      auto out = io::to_json(rep, r, target);
      std::string table = std::string("reflection: ") + yn(rep.holds()) + "\n  subset condition: " +
                          (rep.subset_ok ? "ok" : "failed") + "\n  coinitial condition: " +
                          (rep.coinitial_ok ? "ok" : "failed") + "\n";
      emit(g, "reflect", out, table);
      return rep.holds() ? 0 : 1;
    }

    if (*dualize_cmd) {
      auto inst = load_instance(g, dual_file);
      Family r = load_family(g, dual_refl, &inst.universe());
      auto ctx = make_context(inst, r, !dual_unchecked, g.budget);
      emit(g, "dualize", io::to_json(ctx.dual));
      return 0;
    }

    if (*tr_cmd) {
      auto th = theorem_from_string(tr_theorem);
      auto dir = direction_from_string(tr_dir);
      if (!th)
        throw ParseError("--theorem: expected t1|t2|t3|t4");
      if (!dir)
        throw ParseError("--direction: expected forward|backward");
      g.inputs.push_back(tr_ctx);
      g.inputs.push_back(tr_strategy);
      auto ctx = io::context_from_json(io::read_file(tr_ctx), !tr_unchecked, g.budget, tr_ctx);
      auto s = io::strategy_from_json(io::read_file(tr_strategy), source_game(ctx, *dir), tr_strategy);
      if (auto legal = check_legal(source_game(ctx, *dir), s); !legal)
        throw LegalityError(tr_strategy + ": " + legal.reason, legal.history.size());
      auto t = translate(*th, *dir, ctx, s);
      emit(g, "translate", io::to_json(t, *th, *dir, ctx));
      return 0;
    }

    if (*vd) {
      auto inst = load_instance(g, vd_file);
      Family r = load_family(g, vd_refl, &inst.universe());
      auto rep = verify_duality(inst, r, opts);
      auto out = io::to_json(rep, r, inst.family);
      if (!rep.solved) {
        auto failed = *rep.reflection.failed_condition();
        std::string msg = std::string(to_string(failed)) + " condition failed";
        if (failed == ReflectionCondition::subset)
          msg += ", witness range " + r.universe.describe(rep.reflection.subset_witness->range());
        else
          msg += ", witness: " + r.universe.describe(r[rep.reflection.coinitial_witness->first]) + " misses " +
                 inst.universe().describe(inst.family[rep.reflection.coinitial_witness->second]);
        emit(g, "verify-duality", out);
        std::cerr << "error: not a reflection: " << msg << "\n";
        return 2;
      }
      std::ostringstream t;
      for (const auto& e : rep.equivalences)
        t << std::left << std::setw(28) << e.name() << (e.primal ? "T" : "F") << " / " << (e.dual ? "T" : "F")
          << (e.holds() ? "  ok" : "  MISMATCH") << "\n";
      emit(g, "verify-duality", out, t.str());
      return rep.all_hold() ? 0 : 1;
    }

    if (*corpus) {
      cfg.seed = g.seed;
      cfg.budget = g.budget;
      cfg.reflection_filter = !no_filter;
      cfg.out_dir = g.out_dir;
      auto res = run_corpus(cfg);
      auto summary = summary_to_json(res);
      json out;
      out["manifest"] = manifest(g, "corpus");
      for (auto& [k, v] : summary.items())
        out[k] = v;
      std::ostringstream t;
      t << "mode        " << summary["mode"].get<std::string>() << "\n"
        << "entries     " << res.entries.size() << " (draws " << res.draws << ", discarded " << res.discarded << ")\n"
        << "duality     " << summary["duality"]["pass"] << " pass / " << summary["duality"]["fail"] << " fail\n"
        << "chain       " << summary["chain"]["pass"] << " pass / " << summary["chain"]["fail"] << " fail\n"
        << "translation " << summary["translations"]["sound"] << " sound / " << summary["translations"]["unsound"]
        << " unsound\n";
      emit(g, "corpus", out, t.str());
      return 0;
    }

    if (*chain) {
      auto inst = load_instance(g, chain_file);
      auto rep = implication_chain(inst, opts);
      std::string t = verdict_table(rep.verdicts, std::string("chain ") + (rep.consistent ? "consistent" : "INCONSISTENT"));
      emit(g, "chain-check", io::to_json(rep), t);
      return rep.consistent ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
