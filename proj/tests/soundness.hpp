#pragma once

// Local soundness of single proof steps, checked against the rank-3 model.
//
// A step at goal G with context Γ is locally sound when, under every
// assignment of the parent's free variables, the children holding implies
// the parent holding. A child holds when for every value of the variables
// it introduces (fresh names), its context implies its goal.

#include <string>
#include <vector>

#include "setproof/kernel.hpp"
#include "setproof/model.hpp"
#include "setproof/script.hpp"

namespace setproof::testing {

struct StepInstance {
  std::vector<std::string> givens;
  std::string goal;
  std::string step;   // script line applied at `target`
  std::string setup = {};  // optional line applied first, at goal 0
  std::string target = "0";
};

inline const std::vector<StepInstance>& step_instances() {
  static const std::vector<StepInstance> suite = {
      {{}, "x in A -> x in A union B", "suppose goal=0"},
      {{}, "forall x (x in A inter B -> x in A)", "let-arbitrary goal=0"},
      {{"y in A"}, "exists x (x in A)", "exhibit-witness goal=0 term=y"},
      {{"A sub B"}, "A sub B & B sub B", "split-and goal=0"},
      {{}, "x in A <-> x in A inter A", "split-iff goal=0"},
      {{"A sub B", "B sub A"}, "A = B", "double-inclusion goal=0"},
      {{"A sub B", "B sub C"}, "A sub C", "unfold-subset-goal goal=0"},
      {{"x in A"}, "x in A | x in B", "prove-left goal=0"},
      {{"x in B"}, "x in A | x in B", "prove-right goal=0"},
      {{}, "x in A | ~x in A", "or-to-conditional goal=0"},
      {{"A sub B", "~x in B"}, "~x in A", "prove-by-contradiction goal=0"},
      {{"x in A inter B"}, "x in A inter B", "conclude goal=0 given=H1"},
      {{"x in A", "~x in A"}, "x in B", "contradiction-close goal=0.0 given=H1 given2=H2", "prove-by-contradiction goal=0",
       "0.0"},
      {{"x in A & x in B"}, "x in B & x in A", "and-elim goal=0 given=H1"},
      {{"x in A <-> x in B", "x in A"}, "x in B", "iff-elim goal=0 given=H1"},
      {{"x in A | x in B"}, "x in A union B", "cases goal=0 given=H1"},
      {{"exists y (y in A & y in B)"}, "exists y (y in B)", "exists-elim goal=0 given=H1 witness=w"},
      {{"forall y (y in A -> y in B)", "x in A"}, "x in B", "forall-elim goal=0 given=H1 term=x"},
      {{"x in A -> x in B", "x in A"}, "x in B", "modus-ponens goal=0 given=H1 given2=H2"},
      {{"x in A -> x in B", "~x in B"}, "~x in A", "modus-tollens goal=0 given=H1 given2=H2"},
      {{}, "x in A \\ B -> x in A", "reexpress-goal goal=0 path=0 rule=member-of-difference dir=forward"},
      {{"x in pow(A)"}, "x sub A", "reexpress-given goal=0 given=H1 path= rule=member-of-power dir=forward"},
      {{"A sub B"}, "A sub B", "comment goal=0 text=\"by definition\""},
  };
  return suite;
}

/// The state after the instance's setup, before its step.
inline ProofState instance_state(const StepInstance& inst) {
  std::vector<Formula> gs;
  for (const auto& g : inst.givens) gs.push_back(parse_formula(g));
  ProofState s = new_proof(gs, parse_formula(inst.goal));
  if (!inst.setup.empty()) s = apply_step(s, parse_step_line(inst.setup));
  return s;
}

inline Formula context_formula(const std::vector<Given>& givens, const Formula& goal) {
  Formula out = goal;
  for (auto it = givens.rbegin(); it != givens.rend(); ++it) out = Formula::implies(it->formula, out);
  return out;
}

inline VarSet node_vars(const ProofNode& n) {
  VarSet vars = free_vars(n.goal);
  for (const auto& g : n.givens) {
    auto v = free_vars(g.formula);
    vars.insert(v.begin(), v.end());
  }
  return vars;
}

/// Returns the first violating assignment as text, or "" when sound.
inline std::string check_local_soundness(const ProofNode& parent, std::size_t rank = 3) {
  VarSet outer = node_vars(parent);
  Formula parent_claim = context_formula(parent.givens, parent.goal);
  std::string failure;
  for_each_assignment(outer, rank, [&](const FiniteModel& m) {
    bool children_hold = true;
    for (const auto& child : parent.children) {
      VarSet extra;
      for (const auto& v : node_vars(*child)) {
        if (!outer.contains(v)) extra.insert(v);
      }
      Formula claim = context_formula(child->givens, child->goal);
      bool holds = for_each_assignment(extra, rank, [&](const FiniteModel& inner) {
        FiniteModel both = m;
        for (const auto& [k, val] : inner.assignment) both.assignment[k] = val;
        return evaluate(claim, both);
      });
      children_hold = children_hold && holds;
    }
    if (children_hold && !evaluate(parent_claim, m)) {
      failure = "violated at an assignment of " + std::to_string(outer.size()) + " variables";
      return false;
    }
    return true;
  });
  return failure;
}

}  // namespace setproof::testing
