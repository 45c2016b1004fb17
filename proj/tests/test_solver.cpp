#include <gtest/gtest.h>

#include "support.hpp"

using namespace selgame;
using namespace testing_support;

TEST(Solve, FixAMarkovWitness) {
  auto rep = solve(fix_a(), Relation::II_markov);
  ASSERT_TRUE(rep.holds);
  ASSERT_TRUE(rep.witness);
  EXPECT_EQ(std::get<MarkovStrategyII>(*rep.witness), (MarkovStrategyII{{{0, 0}}}));
  EXPECT_FALSE(rep.bound_hit);
}

TEST(Solve, FixBOneRoundIPredetermined) {
  auto g = fix_b(1).game;
  auto rep = solve(g, Relation::I_pre);
  ASSERT_TRUE(rep.holds);
  EXPECT_EQ(std::get<PredeterminedStrategyI>(*rep.witness).moves, (std::vector<MemberIndex>{0}));
}

TEST(Solve, FixBTwoRoundsIIFull) {
  auto g = fix_b(2).game;
  EXPECT_TRUE(solve(g, Relation::II_full).holds);
  EXPECT_FALSE(solve(g, Relation::I_full).holds);
}

TEST(Solve, RejectsDegenerateInstances) {
  auto g = fix_a();
  g.horizon = 0;
  EXPECT_THROW(solve(g, Relation::I_full), DomainError);
  g = fix_a();
  g.family.members.clear();
  EXPECT_THROW(solve(g, Relation::II_markov), DomainError);
}

TEST(Solve, BudgetExceeded) {
  auto u = Universe::from_ids({"a", "b", "c", "d", "e"});
  GameInstance g{family_of(u, {}), PayoffPredicate::extensional(5, {AtomSet::of({0, 2})}), 3};
  g.family.members = {AtomSet::of({0, 1, 2}), AtomSet::of({2, 3, 4}), AtomSet::of({0, 4})};
  EXPECT_THROW(solve(g, Relation::II_full, SolverOptions{3}), BoundExceeded);
}

TEST(Verify, FixAMarkovWins) {
  EXPECT_TRUE(verify_strategy(fix_a(), MarkovStrategyII{{{0, 0}}}).winning);
}

TEST(Verify, FixALosingMarkovCounterexample) {
  auto r = verify_strategy(fix_a(), MarkovStrategyII{{{0, 1}}});
  EXPECT_FALSE(r.winning);
  EXPECT_EQ(r.counterexample, (std::vector<std::size_t>{1}));
  ASSERT_TRUE(r.transcript);
  EXPECT_EQ(r.transcript->outcome, AtomSet::of({1}));
}

TEST(Verify, FixBFirstAtomStrategyLoses) {
  auto g = fix_b(2).game;
  FullStrategyII s{2, {}};
  s.table[{0}] = g.family[0].min();
  s.table[{0, 0}] = g.family[0].min();
  auto r = verify_strategy(g, s);
  EXPECT_FALSE(r.winning);
  EXPECT_EQ(r.counterexample, (std::vector<std::size_t>{0, 0}));
  EXPECT_EQ(r.transcript->outcome, AtomSet::of({g.family[0].min()}));
}

TEST(Chain, FixAAndFixB) {
  auto a = implication_chain(fix_a());
  EXPECT_TRUE(a.consistent);
  EXPECT_TRUE(a.verdicts.ii_markov);
  EXPECT_TRUE(a.verdicts.ii_full);
  EXPECT_FALSE(a.verdicts.i_full);
  EXPECT_FALSE(a.verdicts.i_pre);
  auto b = implication_chain(fix_b(1).game);
  EXPECT_TRUE(b.consistent);
  EXPECT_FALSE(b.verdicts.ii_markov);
  EXPECT_FALSE(b.verdicts.ii_full);
  EXPECT_TRUE(b.verdicts.i_full);
  EXPECT_TRUE(b.verdicts.i_pre);
}

TEST(Chain, FlagsMarkovWithoutFull) {
  Verdicts v;
  v.ii_markov = true;
  v.i_full = true;
  auto r = check_chain(v);
  EXPECT_FALSE(r.consistent);
  EXPECT_EQ(r.violations.front(), "II_markov holds but II_full fails");
}

// Cross-check against plain tree enumeration on random small instances.
TEST(SolverOracle, AgreesWithNaiveEnumeration) {
  Gen gen(2024);
  for (int i = 0; i < 300; ++i) {
    auto g = gen.instance(4, 4, 3, 3);
    auto want = naive_verdicts(g);
    auto got = solve_all(g);
    ASSERT_EQ(got.i_full, want.i_full) << "instance " << i;
    ASSERT_EQ(got.ii_full, want.ii_full) << "instance " << i;
    ASSERT_EQ(got.i_pre, want.i_pre) << "instance " << i;
    ASSERT_EQ(got.ii_markov, want.ii_markov) << "instance " << i;
  }
}

TEST(SolverOracle, ExhaustiveFallbackGivesSameVerdictAndWitness) {
  Gen gen(77);
  SolverOptions ex;
  ex.exhaustive = true;
  for (int i = 0; i < 200; ++i) {
    auto g = gen.instance(4, 3, 3, 3);
    for (auto rel : {Relation::I_pre, Relation::II_markov}) {
      auto a = solve(g, rel), b = solve(g, rel, ex);
      ASSERT_EQ(a.holds, b.holds);
      if (a.holds) {
        ASSERT_TRUE(b.witness);
        EXPECT_EQ(*a.witness, *b.witness) << to_string(rel) << " instance " << i;
      }
    }
  }
}

TEST(SolverProperties, MemoOnOffDeterminacyChainWitnesses) {
  Gen gen(99);
  SolverOptions nomemo;
  nomemo.memoize = false;
  for (int i = 0; i < 200; ++i) {
    auto g = gen.instance(5, 4, 3, 3);
    for (auto rel : kAllRelations) {
      auto a = solve(g, rel), b = solve(g, rel, nomemo);
      ASSERT_EQ(a.holds, b.holds);
      if (a.holds) {
        ASSERT_TRUE(a.witness);
        EXPECT_TRUE(check_legal(g, *a.witness).legal);
        EXPECT_TRUE(verify_strategy(g, *a.witness).winning) << to_string(rel) << " instance " << i;
      }
    }
    auto c = implication_chain(g);
    EXPECT_TRUE(c.consistent) << (c.violations.empty() ? "" : c.violations.front());
    EXPECT_NE(c.verdicts.i_full, c.verdicts.ii_full);
  }
}

TEST(SolverProperties, IsDeterministic) {
  Gen gen(5);
  auto g = gen.instance(5, 4, 3, 3);
  for (auto rel : kAllRelations) {
    auto a = solve(g, rel), b = solve(g, rel);
    EXPECT_EQ(a.holds, b.holds);
    EXPECT_EQ(a.nodes, b.nodes);
    EXPECT_EQ(a.witness, b.witness);
  }
}

TEST(Transversals, MinimalHittingSets) {
  Budget b(1000);
  auto t = minimal_transversals({AtomSet::of({0, 1}), AtomSet::of({1, 2})}, b);
  std::sort(t.begin(), t.end());
  EXPECT_EQ(t, (std::vector<AtomSet>{AtomSet::of({1}), AtomSet::of({0, 2})}));
}
