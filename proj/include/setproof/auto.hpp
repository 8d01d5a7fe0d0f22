#pragma once

// The Auto command: picks the next step from the goal's logical form alone.

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "setproof/kernel.hpp"

namespace setproof {

struct AutoOutcome {
  std::optional<StepDescriptor> applied;  // absent: nothing fired, state unchanged
  ProofState state;
};

/// The step Auto would take at an open goal, if any. Priority: conclude from
/// an alpha-equal given; close a contradiction goal from a P, not P pair;
/// then decompose by main connective (->, forall, and, <->, sub, =, not).
/// Throws UnknownGoal.
std::optional<StepDescriptor> auto_choose(const ProofState& state, const GoalId& goal);

AutoOutcome auto_step(const ProofState& state, const GoalId& goal);

struct AutoRun {
  ProofState state;
  std::vector<StepDescriptor> applied;
};

/// Repeats auto_step on the first open goal under `goal` until nothing fires,
/// the subtree closes, or `max_steps` steps have been applied.
AutoRun auto_run(const ProofState& state, const GoalId& goal, std::size_t max_steps = 50);

}  // namespace setproof
