#pragma once

// The proof model: a derivation tree whose open leaves are goals, each with
// its own labeled context of givens, plus the step catalog that grows it.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "setproof/formula.hpp"
#include "setproof/reexpress.hpp"
#include "setproof/syntax.hpp"

namespace setproof {

enum class StepKind {
  // goal-oriented
  Suppose,
  LetArbitrary,
  ExhibitWitness,
  SplitAnd,
  SplitIff,
  DoubleInclusion,
  UnfoldSubsetGoal,
  ProveLeft,
  ProveRight,
  OrToConditional,
  ProveByContradiction,
  Conclude,
  ContradictionClose,
  // inferences from givens
  AndElim,
  IffElim,
  Cases,
  ExistsElim,
  ForallElim,
  ModusPonens,
  ModusTollens,
  // re-expression
  ReexpressGoal,
  ReexpressGiven,
  Comment,
};

/// Every kind, in menu order.
const std::vector<StepKind>& all_step_kinds();
/// Hyphenated lowercase name, e.g. "forall-elim".
std::string_view step_kind_name(StepKind kind);
std::optional<StepKind> step_kind_from_name(std::string_view name);
/// True for the inferences-from-givens group (and reexpress-given).
bool is_inference(StepKind kind);

/// Dotted child-index path from the derivation root, e.g. "0", "0.1.0".
class GoalId {
 public:
  GoalId() : path_{0} {}
  explicit GoalId(std::vector<std::size_t> path);
  /// Throws UnknownGoal for text that is not a dotted path starting at 0.
  static GoalId parse(std::string_view text);

  const std::vector<std::size_t>& path() const { return path_; }
  GoalId child(std::size_t i) const;
  bool is_descendant_of(const GoalId& ancestor) const;
  std::string str() const;

  friend bool operator==(const GoalId&, const GoalId&) = default;
  friend auto operator<=>(const GoalId&, const GoalId&) = default;

 private:
  std::vector<std::size_t> path_;
};

/// One proof action. Which optional arguments are required depends on the
/// kind; see step_arguments.
struct StepDescriptor {
  StepKind kind = StepKind::Suppose;
  GoalId target;
  std::optional<std::string> given;
  std::optional<std::string> given2;
  std::optional<Term> term;
  std::optional<VarName> witness;  // the new name for exists-elim
  std::optional<std::string> label;  // name for the new given, when one is added
  std::optional<Path> path;
  std::optional<std::string> rule;
  std::optional<Direction> direction;
  std::optional<std::string> text;

  friend bool operator==(const StepDescriptor&, const StepDescriptor&) = default;
};

struct StepArguments {
  std::vector<std::string> required;
  std::vector<std::string> optional;
};
/// Argument names accepted by a kind: "given", "given2", "term", "witness",
/// "label", "path", "rule", "dir", "text".
const StepArguments& step_arguments(StepKind kind);

/// The step's arguments as (name, value) pairs in canonical order, starting
/// with "kind" and "goal". Formulas and terms use the ascii syntax.
std::vector<std::pair<std::string, std::string>> step_to_attributes(const StepDescriptor& step);
/// Inverse of step_to_attributes. Unknown kinds or attribute names and
/// malformed values raise SchemaViolation.
StepDescriptor step_from_attributes(const std::vector<std::pair<std::string, std::string>>& attributes);

enum class GivenOrigin { Hypothesis, Assumption, Instantiation, Inference, Reexpression };
std::string_view given_origin_name(GivenOrigin origin);

struct Given {
  std::string label;
  Formula formula;
  GivenOrigin origin;
};

/// A node of the derivation tree. Every node records the goal it proves and
/// its context; Branch and Closed nodes also record the step applied there.
struct ProofNode {
  enum class Kind { Open, Closed, Branch };
  Kind kind = Kind::Open;
  Formula goal;
  std::vector<Given> givens;
  std::vector<std::string> comments;
  std::optional<StepDescriptor> step;
  /// Givens this node added to its parent's context.
  std::vector<Given> introduced;
  /// Fresh variable chosen by the step at this node, if any.
  std::optional<VarName> fresh;
  std::vector<std::shared_ptr<const ProofNode>> children;
};

using NodePtr = std::shared_ptr<const ProofNode>;

struct ProofState {
  std::vector<Given> theorem_givens;
  Formula theorem_goal;
  NodePtr root;
};

struct OpenGoal {
  GoalId id;
  Formula goal;
  std::vector<Given> givens;
  std::vector<std::string> comments;
};

/// Throws InvalidTheorem when a formula contains a contradiction, or when a
/// supplied label is malformed or repeated. Labels default to H1, H2, ...
ProofState new_proof(const std::vector<Formula>& givens, const Formula& goal,
                     const std::vector<std::string>& labels = {});

/// Open leaves in depth-first, left-to-right order.
std::vector<OpenGoal> open_goals(const ProofState& state);
bool is_complete(const ProofState& state);

/// Throws UnknownGoal when `id` addresses no node.
const ProofNode& node_at(const ProofState& state, const GoalId& id);

/// A menu entry: a partially filled step plus the arguments the user must
/// still supply.
struct StepTemplate {
  StepDescriptor step;
  std::vector<std::string> needs;
};

/// Without a selected given: the goal-oriented actions for the goal's form
/// (plus re-express-goal and comment). With one: the inferences for that
/// given's form (plus re-express-given). Throws UnknownGoal / UnknownGiven.
std::vector<StepTemplate> applicable_steps(const ProofState& state, const GoalId& goal,
                                           const std::optional<std::string>& selected_given = std::nullopt);

/// Applies one step, returning the new state; unchanged subtrees are shared.
/// Throws NotApplicable, FreshnessViolation, UnknownGoal, UnknownGiven,
/// ArgumentMissing, InvalidArgument, or the re-expression errors.
ProofState apply_step(const ProofState& state, const StepDescriptor& step);

enum class OutlineStyle { Text, Unicode, Html };

/// Structured natural-language outline. Open goals appear as
/// "[Proof of G goes here.]"; a complete proof ends with "∎".
std::string render_outline(const ProofState& state, OutlineStyle style);

}  // namespace setproof
