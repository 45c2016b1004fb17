#include <gtest/gtest.h>

#include <algorithm>

#include "support.hpp"

using namespace selgame;
using namespace testing_support;

TEST(AtomSet, BasicOperations) {
  auto s = AtomSet::of({0, 2});
  EXPECT_EQ(s.size(), 2u);
  EXPECT_TRUE(s.contains(2));
  EXPECT_FALSE(s.contains(1));
  EXPECT_TRUE(AtomSet::of({2}).subset_of(s));
  EXPECT_EQ(s.min(), 0u);
  EXPECT_EQ((s | AtomSet::of({1})).size(), 3u);
  EXPECT_EQ((s & AtomSet::of({2, 3})), AtomSet::of({2}));
  EXPECT_EQ(s.indices(), (std::vector<AtomIndex>{0, 2}));
}

TEST(Universe, RejectsMoreThan64Atoms) {
  std::vector<std::string> ids;
  for (int i = 0; i < 65; ++i)
    ids.push_back(std::to_string(i));
  EXPECT_THROW(Universe::from_ids(ids), DomainError);
}

TEST(Validate, FixAIsWellFormed) { EXPECT_TRUE(validate_instance(fix_a()).ok()); }

TEST(Validate, EmptyMember) {
  auto g = fix_a();
  g.family.members.push_back(AtomSet{});
  auto rep = validate_instance(g);
  ASSERT_FALSE(rep.ok());
  EXPECT_NE(rep.violations.front().find("empty family member"), std::string::npos);
}

TEST(Validate, AtomOutsideUniverse) {
  auto g = fix_a();
  g.family.members.push_back(AtomSet::of({2}));
  auto rep = validate_instance(g);
  ASSERT_FALSE(rep.ok());
  bool found = std::any_of(rep.violations.begin(), rep.violations.end(),
                           [](const std::string& v) { return v.find("atom outside universe") != std::string::npos; });
  EXPECT_TRUE(found);
}

TEST(Validate, DuplicateMemberAndHorizon) {
  auto g = fix_a();
  g.family.members.push_back(AtomSet::of({0}));
  g.horizon = 0;
  auto rep = validate_instance(g);
  EXPECT_EQ(rep.violations.size(), 2u);
}

TEST(Payoff, Extensional) {
  auto p = PayoffPredicate::extensional(2, {AtomSet::of({0})});
  EXPECT_TRUE(eval_payoff(p, AtomSet::of({0})));
  EXPECT_FALSE(eval_payoff(p, AtomSet::of({0, 1})));
  EXPECT_FALSE(eval_payoff(p.negate(), AtomSet::of({0})));
}

TEST(Payoff, AtomOutsideUniverseIsDomainError) {
  auto p = PayoffPredicate::extensional(2, {AtomSet::of({0})});
  EXPECT_THROW(p.eval(AtomSet::of({3})), DomainError);
}

TEST(Payoff, CoverOnDiscreteTwoPoint) {
  auto g = fix_b(1).game;
  auto u = g.universe();
  auto a0 = *u.index_of("{0}"), a1 = *u.index_of("{1}");
  EXPECT_TRUE(g.payoff.eval(AtomSet::of({a0, a1})));
  EXPECT_FALSE(g.payoff.eval(AtomSet::of({a0})));
}

TEST(Payoff, NegationIsComplementEverywhere) {
  Gen gen(7);
  for (int i = 0; i < 50; ++i) {
    auto p = gen.payoff(4);
    for (std::uint64_t m = 0; m < 16; ++m)
      EXPECT_NE(p.eval(AtomSet(m)), p.negate().eval(AtomSet(m)));
  }
}

TEST(Payoff, DependsOnlyOnTheSetOfPicks) {
  Gen gen(11);
  for (int i = 0; i < 50; ++i) {
    auto p = gen.payoff(4);
    std::vector<AtomIndex> picks{0, 2, 2, 3};
    auto base = p.eval(set_of(picks));
    std::reverse(picks.begin(), picks.end());
    picks.push_back(0);
    EXPECT_EQ(base, p.eval(set_of(picks)));
  }
}

TEST(Family, SameMembersIgnoresOrder) {
  auto u = Universe::from_ids({"a", "b"});
  EXPECT_TRUE(same_members(family_of(u, {AtomSet::of({0}), AtomSet::of({1})}),
                           family_of(u, {AtomSet::of({1}), AtomSet::of({0})})));
}

TEST(Family, MinimalIndices) {
  auto u = Universe::from_ids({"a", "b", "c"});
  auto f = family_of(u, {AtomSet::of({0, 1}), AtomSet::of({0}), AtomSet::of({1, 2})});
  EXPECT_EQ(f.minimal_indices(), (std::vector<MemberIndex>{1, 2}));
}
