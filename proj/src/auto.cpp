#include "setproof/auto.hpp"

#include "setproof/error.hpp"

namespace setproof {

std::optional<StepDescriptor> auto_choose(const ProofState& state, const GoalId& goal_id) {
  using K = Formula::Kind;
  const ProofNode& node = node_at(state, goal_id);
  if (node.kind != ProofNode::Kind::Open) throw Error(ErrorCode::UnknownGoal, "goal '" + goal_id.str() + "' is not open");
  const Formula& goal = node.goal;

  StepDescriptor s;
  s.target = goal_id;
  for (const auto& g : node.givens) {
    if (alpha_eq(g.formula, goal)) {
      s.kind = StepKind::Conclude;
      s.given = g.label;
      return s;
    }
  }
  if (goal.kind() == K::Contradiction) {
    for (const auto& a : node.givens) {
      for (const auto& b : node.givens) {
        if (b.formula.kind() == K::Not && alpha_eq(b.formula.sub(0), a.formula)) {
          s.kind = StepKind::ContradictionClose;
          s.given = a.label;
          s.given2 = b.label;
          return s;
        }
      }
    }
    return std::nullopt;
  }
  switch (goal.kind()) {
    case K::Implies: s.kind = StepKind::Suppose; break;
    case K::ForAll: s.kind = StepKind::LetArbitrary; break;
    case K::And: s.kind = StepKind::SplitAnd; break;
    case K::Iff: s.kind = StepKind::SplitIff; break;
    case K::Subset: s.kind = StepKind::UnfoldSubsetGoal; break;
    case K::Eq: s.kind = StepKind::DoubleInclusion; break;
    case K::Not: s.kind = StepKind::ProveByContradiction; break;
    default: return std::nullopt;
  }
  return s;
}

AutoOutcome auto_step(const ProofState& state, const GoalId& goal) {
  auto step = auto_choose(state, goal);
  if (!step) return {std::nullopt, state};
  return {step, apply_step(state, *step)};
}

AutoRun auto_run(const ProofState& state, const GoalId& goal, std::size_t max_steps) {
  node_at(state, goal);
  AutoRun run{state, {}};
  while (run.applied.size() < max_steps) {
    std::optional<GoalId> next;
    for (const auto& open : open_goals(run.state)) {
      if (open.id.is_descendant_of(goal)) {
        next = open.id;
        break;
      }
    }
    if (!next) break;
    auto outcome = auto_step(run.state, *next);
    if (!outcome.applied) break;
    run.applied.push_back(*outcome.applied);
    run.state = std::move(outcome.state);
  }
  return run;
}

}  // namespace setproof
