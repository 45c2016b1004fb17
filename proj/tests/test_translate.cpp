#include <gtest/gtest.h>

#include <functional>

#include "selgame/corpus.hpp"
#include "support.hpp"

using namespace selgame;
using namespace testing_support;

namespace {

DualityContext fix_a_ctx(std::vector<AtomSet> r, bool require = true) {
  auto g = fix_a();
  return make_context(g, family_of(g.universe(), std::move(r)), require);
}

} // namespace

TEST(Context, RequiresReflection) {
  EXPECT_NO_THROW(fix_a_ctx({AtomSet::of({0})}));
  EXPECT_THROW(fix_a_ctx({AtomSet::of({0, 1})}), ReflectionError);
  auto ctx = fix_a_ctx({AtomSet::of({0, 1})}, false);
  EXPECT_FALSE(ctx.reflection_checked);
}

TEST(T1, FixABackward) {
  auto ctx = fix_a_ctx({AtomSet::of({0})});
  auto tr = t1(ctx, Direction::backward, MarkovStrategyII{{{0}}});
  EXPECT_EQ(std::get<PredeterminedStrategyI>(tr.strategy).moves, (std::vector<MemberIndex>{0}));
}

TEST(T1, ForwardIsTotalOnLosingInput) {
  auto ctx = fix_a_ctx({AtomSet::of({0})});
  auto tr = t1(ctx, Direction::forward, PredeterminedStrategyI{{1}});
  EXPECT_TRUE(check_legal(ctx.dual, tr.strategy).legal);
  EXPECT_FALSE(verify_strategy(ctx.dual, tr.strategy).winning);
}

TEST(T1, FixBPointOpenMarkov) {
  auto res = fix_b(1);
  const auto& ctx = res.duality;
  auto tr = t1(ctx, Direction::forward, PredeterminedStrategyI{{0}});
  const auto& mk = std::get<MarkovStrategyII>(tr.strategy);
  const auto& r = ctx.reflection_family();
  for (MemberIndex i = 0; i < r.size(); ++i) {
    ASSERT_EQ(r[i].size(), 1u);
    EXPECT_EQ(mk.at(i, 0), r[i].min());
  }
  EXPECT_TRUE(verify_strategy(ctx.dual, tr.strategy).winning);
}

TEST(T2, FixAForward) {
  auto ctx = fix_a_ctx({AtomSet::of({0})});
  auto tr = t2(ctx, Direction::forward, MarkovStrategyII{{{0, 0}}});
  EXPECT_EQ(std::get<PredeterminedStrategyI>(tr.strategy).moves, (std::vector<MemberIndex>{0}));
  EXPECT_TRUE(verify_strategy(ctx.dual, tr.strategy).winning);
}

TEST(T2, FixABackward) {
  auto ctx = fix_a_ctx({AtomSet::of({0})});
  auto tr = t2(ctx, Direction::backward, PredeterminedStrategyI{{0}});
  EXPECT_EQ(std::get<MarkovStrategyII>(tr.strategy), (MarkovStrategyII{{{0, 0}}}));
}

TEST(T2, ForwardReportsReflectionViolation) {
  auto ctx = fix_a_ctx({AtomSet::of({0, 1})}, false);
  try {
    t2(ctx, Direction::forward, MarkovStrategyII{{{0, 0}}});
    FAIL() << "expected TranslationError";
  } catch (const TranslationError& e) {
    EXPECT_NE(std::string(e.what()).find("2"), std::string::npos);
  }
}

TEST(T3, FixAForwardIsLegalAndMirrorsTheSource) {
  auto ctx = fix_a_ctx({AtomSet::of({0})});
  FullStrategyI s{1, {{{}, 1}}};
  auto tr = t3(ctx, Direction::forward, s);
  const auto& out = std::get<FullStrategyII>(tr.strategy);
  EXPECT_TRUE(check_legal(ctx.dual, out).legal);
  EXPECT_TRUE(AtomSet::single(out.table.at({0})).subset_of(AtomSet::of({0, 1})));
  // The source loses in the primal, so the image loses in the dual.
  EXPECT_FALSE(verify_strategy(ctx.primal, s).winning);
  EXPECT_FALSE(verify_strategy(ctx.dual, out).winning);
}

TEST(T3, FixBCoverEveryRound) {
  for (std::size_t n : {1, 2}) {
    auto res = fix_b(n);
    FullStrategyI s = to_full(res.game, PredeterminedStrategyI{std::vector<MemberIndex>(n, 0)});
    auto tr = t3(res.duality, Direction::forward, s);
    EXPECT_TRUE(check_legal(res.duality.dual, tr.strategy).legal);
    EXPECT_EQ(verify_strategy(res.duality.dual, tr.strategy).winning, verify_strategy(res.game, s).winning);
  }
  EXPECT_TRUE(verify_strategy(fix_b(1).game, to_full(fix_b(1).game, PredeterminedStrategyI{{0}})).winning);
}

TEST(T4, FixAForward) {
  auto ctx = fix_a_ctx({AtomSet::of({0})});
  FullStrategyII s{1, {{{0}, 0}, {{1}, 0}}};
  auto tr = t4(ctx, Direction::forward, s);
  const auto& out = std::get<FullStrategyI>(tr.strategy);
  for (const auto& [h, m] : out.table)
    EXPECT_EQ(m, 0u);
  EXPECT_TRUE(verify_strategy(ctx.dual, out).winning);
}

TEST(T4, SierpinskiPointPicking) {
  auto res = named_game(sierpinski_space(), NamedGame::selective_separability, 1);
  const auto& ctx = res.duality;
  const auto& d = ctx.primal.family;
  FullStrategyII s{1, {}};
  for (MemberIndex i = 0; i < d.size(); ++i)
    s.table[{i}] = 1;
  ASSERT_TRUE(verify_strategy(ctx.primal, s).winning);
  auto tr = t4(ctx, Direction::forward, s);
  const auto& out = std::get<FullStrategyI>(tr.strategy);
  const auto& t = ctx.reflection_family();
  for (const auto& [h, m] : out.table)
    EXPECT_EQ(t[m], AtomSet::of({1}));
  EXPECT_TRUE(verify_strategy(ctx.dual, out).winning);
}

// At one round the full translations reduce to the limited ones.
TEST(Composition, SingleRoundAgreement) {
  Gen gen(404);
  CorpusRng rng(404);
  CorpusConfig cfg;
  cfg.max_horizon = 1;
  int checked = 0;
  for (int i = 0; i < 200 && checked < 60; ++i) {
    Family a, r;
    const std::size_t n = rng.uniform(1, cfg.max_universe);
    if (!detail::draw_reflection_pair(rng, cfg, n, a, r))
      continue;
    GameInstance g{a, gen.payoff(n), 1};
    auto ctx = make_context(g, r);
    ++checked;

    PredeterminedStrategyI p{{gen.pick(0, a.size() - 1)}};
    auto lim = std::get<MarkovStrategyII>(t1(ctx, Direction::forward, p).strategy);
    auto full = std::get<FullStrategyII>(t3(ctx, Direction::forward, to_full(g, p)).strategy);
    for (MemberIndex j = 0; j < r.size(); ++j)
      EXPECT_EQ(full.table.at({j}), lim.at(j, 0));

    MarkovStrategyII mk{{{}}};
    for (auto m : a.members)
      mk.table[0].push_back(atoms_of(m)[gen.pick(0, m.size() - 1)]);
    std::optional<PredeterminedStrategyI> pre;
    std::optional<FullStrategyI> fi;
    try {
      pre = std::get<PredeterminedStrategyI>(t2(ctx, Direction::forward, mk).strategy);
    } catch (const TranslationError&) {
    }
    try {
      fi = std::get<FullStrategyI>(t4(ctx, Direction::forward, to_full(g, mk)).strategy);
    } catch (const TranslationError&) {
    }
    ASSERT_EQ(pre.has_value(), fi.has_value());
    if (pre)
      EXPECT_EQ(fi->table.at({}), pre->moves[0]);

    PredeterminedStrategyI dp{{gen.pick(0, r.size() - 1)}};
    auto back2 = std::get<MarkovStrategyII>(t2(ctx, Direction::backward, dp).strategy);
    auto back4 = std::get<FullStrategyII>(t4(ctx, Direction::backward, to_full(ctx.dual, dp)).strategy);
    for (MemberIndex j = 0; j < a.size(); ++j)
      EXPECT_EQ(back4.table.at({j}), back2.at(j, 0));
  }
  EXPECT_GE(checked, 30);
}

// Every solver witness translates to a winning strategy, and t3 backward
// never consults the entries it marked off-path.
TEST(Soundness, RandomReflectionPairs) {
  Gen gen(17);
  CorpusRng rng(17);
  CorpusConfig cfg;
  int pairs = 0, witnesses = 0;
  for (int i = 0; i < 600 && pairs < 120; ++i) {
    Family a, r;
    const std::size_t n = rng.uniform(1, cfg.max_universe);
    if (!detail::draw_reflection_pair(rng, cfg, n, a, r))
      continue;
    GameInstance g{a, gen.payoff(n), gen.pick(1, 3)};
    auto ctx = make_context(g, r);
    ++pairs;
    for (const auto& c : translation_soundness(ctx)) {
      EXPECT_TRUE(c.sound()) << to_string(c.theorem) << " " << to_string(c.direction) << " " << c.error;
      witnesses += c.source_holds;
    }

    auto w = solve(ctx.dual, Relation::II_full);
    if (!w.holds)
      continue;
    auto tr = t3(ctx, Direction::backward, *w.witness);
    const auto& fi = std::get<FullStrategyI>(tr.strategy);
    std::vector<AtomIndex> h;
    std::function<void()> walk = [&] {
      if (h.size() == g.horizon)
        return;
      EXPECT_FALSE(tr.off_path.count(h)) << "off-path entry consulted";
      for (auto x : atoms_of(a[fi.table.at(h)])) {
        h.push_back(x);
        walk();
        h.pop_back();
      }
    };
    walk();
  }
  EXPECT_GE(pairs, 100);
  EXPECT_GT(witnesses, 0);
}

TEST(Translate, WrongStrategyClassIsRejected) {
  auto ctx = fix_a_ctx({AtomSet::of({0})});
  EXPECT_ANY_THROW(t1(ctx, Direction::forward, MarkovStrategyII{{{0, 0}}}));
}

TEST(Duality, FixA) {
  auto g = fix_a();
  auto rep = verify_duality(g, family_of(g.universe(), {AtomSet::of({0})}));
  EXPECT_TRUE(rep.solved);
  EXPECT_TRUE(rep.all_hold());
  auto bad = verify_duality(g, family_of(g.universe(), {AtomSet::of({0, 1})}));
  EXPECT_FALSE(bad.solved);
  EXPECT_EQ(bad.reflection.failed_condition(), ReflectionCondition::subset);
}
