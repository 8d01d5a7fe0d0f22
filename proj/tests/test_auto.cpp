#include <gtest/gtest.h>

#include "setproof/auto.hpp"
#include "setproof/error.hpp"
#include "random_states.hpp"
#include "support.hpp"

using namespace setproof;
using setproof::testing::F;

TEST(AutoStep, PriorityTable) {
  auto s = new_proof({}, F("forall x (x in A -> x in A)"));
  auto out = auto_step(s, GoalId());
  ASSERT_TRUE(out.applied);
  EXPECT_EQ(out.applied->kind, StepKind::LetArbitrary);

  auto c = new_proof({F("x in B"), F("x in A")}, F("x in A"));
  out = auto_step(c, GoalId());
  ASSERT_TRUE(out.applied);
  EXPECT_EQ(out.applied->kind, StepKind::Conclude);
  EXPECT_EQ(out.applied->given, "H2");

  auto e = new_proof({}, F("exists x (x in A)"));
  out = auto_step(e, GoalId());
  EXPECT_FALSE(out.applied);
  EXPECT_EQ(out.state.root.get(), e.root.get());
}

TEST(AutoStep, ByMainConnective) {
  const std::pair<const char*, StepKind> table[] = {
      {"x in A -> x in B", StepKind::Suppose},       {"forall x (x in A)", StepKind::LetArbitrary},
      {"x in A & x in B", StepKind::SplitAnd},       {"x in A <-> x in B", StepKind::SplitIff},
      {"A sub B", StepKind::UnfoldSubsetGoal},       {"A = B", StepKind::DoubleInclusion},
      {"~x in A", StepKind::ProveByContradiction},
  };
  for (const auto& [goal, kind] : table) {
    auto out = auto_step(new_proof({}, F(goal)), GoalId());
    ASSERT_TRUE(out.applied) << goal;
    EXPECT_EQ(out.applied->kind, kind) << goal;
  }
  for (const char* goal : {"x in A | x in B", "x in A", "exists! x (x in A)"}) {
    EXPECT_FALSE(auto_step(new_proof({}, F(goal)), GoalId()).applied) << goal;
  }
}

TEST(AutoStep, ClosesContradictions) {
  auto s = new_proof({F("x in A"), F("~x in A")}, F("x in B"));
  s = apply_step(s, StepDescriptor{.kind = StepKind::ProveByContradiction});
  auto out = auto_step(s, GoalId::parse("0.0"));
  ASSERT_TRUE(out.applied);
  EXPECT_EQ(out.applied->kind, StepKind::ContradictionClose);
  EXPECT_TRUE(is_complete(out.state));
  // A bare contradiction goal with nothing to close it stays put.
  auto lone = apply_step(new_proof({}, F("x in B")), StepDescriptor{.kind = StepKind::ProveByContradiction});
  auto stuck = auto_step(lone, GoalId::parse("0.0"));
  EXPECT_FALSE(stuck.applied);
}

TEST(AutoRun, StopsWhenStuck) {
  auto run = auto_run(new_proof({}, F("forall x (x in A inter B -> x in A)")), GoalId());
  ASSERT_EQ(run.applied.size(), 2u);
  EXPECT_EQ(run.applied[0].kind, StepKind::LetArbitrary);
  EXPECT_EQ(run.applied[1].kind, StepKind::Suppose);
  auto goals = open_goals(run.state);
  ASSERT_EQ(goals.size(), 1u);
  EXPECT_EQ(goals[0].goal, F("x0 in A"));
}

TEST(AutoRun, ClosesSubtree) {
  auto run = auto_run(new_proof({}, F("x in A -> x in A")), GoalId());
  ASSERT_EQ(run.applied.size(), 2u);
  EXPECT_EQ(run.applied[1].kind, StepKind::Conclude);
  EXPECT_TRUE(is_complete(run.state));
  EXPECT_TRUE(auto_run(run.state, GoalId()).applied.empty());
}

TEST(AutoRun, MaxStepsAndScope) {
  auto s = new_proof({}, F("(x in A -> x in A) & (y in B -> y in B)"));
  auto one = auto_run(s, GoalId(), 1);
  EXPECT_EQ(one.applied.size(), 1u);
  auto all = auto_run(s, GoalId());
  EXPECT_EQ(all.applied.size(), 5u);
  EXPECT_TRUE(is_complete(all.state));
  // Only the targeted subtree is worked on.
  auto split = apply_step(s, StepDescriptor{.kind = StepKind::SplitAnd});
  auto right = auto_run(split, GoalId::parse("0.1"));
  EXPECT_EQ(right.applied.size(), 2u);
  ASSERT_EQ(open_goals(right.state).size(), 1u);
  EXPECT_EQ(open_goals(right.state)[0].id.str(), "0.0");
}

TEST(AutoRun, UnknownGoal) {
  EXPECT_THROW(auto_run(new_proof({}, F("A sub A")), GoalId::parse("0.4")), Error);
  EXPECT_THROW(auto_step(new_proof({}, F("A sub A")), GoalId::parse("0.4")), Error);
}

TEST(AutoStep, OnlyChoosesOfferedSteps) {
  setproof::testing::FormulaGen gen(314);
  int fired = 0;
  for (int i = 0; i < 200; ++i) {
    auto s = setproof::testing::random_state(gen, 6);
    for (const auto& g : open_goals(s)) {
      auto step = auto_choose(s, g.id);
      if (!step) continue;
      ++fired;
      bool offered = false;
      for (const auto& t : applicable_steps(s, g.id)) offered = offered || (t.needs.empty() && t.step == *step);
      EXPECT_TRUE(offered) << step_kind_name(step->kind) << " at " << g.id.str() << ": " << render(g.goal);
      EXPECT_NO_THROW(apply_step(s, *step));
    }
  }
  EXPECT_GT(fired, 100);
}
