#pragma once

// Re-expression of formulas by definitional unfoldings and logical
// equivalences, applied at any subformula position in either direction.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "setproof/formula.hpp"
#include "setproof/history.hpp"

namespace setproof {

enum class Direction { Forward, Backward };
enum class RuleKind { Definitional, Logical };

std::string_view direction_name(Direction d);
/// Accepts "forward"/"backward"; throws InvalidArgument otherwise.
Direction parse_direction(std::string_view text);

/// One equivalence schema `lhs <=> rhs`. Metavariables come in three sorts:
/// formula placeholders (P, Q), term placeholders (x, A, B, F) and bound
/// variable names (x, S, y). Bound names that appear on one side only are
/// chosen fresh when that side is built.
struct EquivRule {
  std::string id;
  std::string name;
  RuleKind kind;
  std::string lhs;  // schematic display, unicode
  std::string rhs;
  std::vector<std::string> formula_metas;
  std::vector<std::string> term_metas;
  std::vector<std::string> binder_metas;
};

/// The closed catalog, in menu order.
const std::vector<EquivRule>& equivalence_rules();
/// Throws UnknownRule.
const EquivRule& find_rule(std::string_view id);

struct MetaAssignment {
  std::map<std::string, Formula> formulas;
  std::map<std::string, Term> terms;
  std::map<std::string, VarName> binders;
};

/// Builds one side of a rule from explicit metavariable values. Missing
/// binders are chosen fresh against the free variables of the values; missing
/// term placeholders become the empty set.
Formula instantiate_rule_side(const EquivRule& rule, bool lhs, const MetaAssignment& values);

struct EquivalenceOption {
  const EquivRule* rule;
  Direction direction;
  Formula preview;  // the whole formula after rewriting
};

/// Every rule whose source side matches the formula node at `path`, in catalog
/// order, forward before backward. Throws InvalidPath (also when `path`
/// addresses a term).
///
/// New bound variables avoid the free variables of `f` and of the node, plus
/// `avoid` (a proof passes its whole context here).
std::vector<EquivalenceOption> applicable_equivalences(const Formula& f, const Path& path, const VarSet& avoid = {});

/// Throws InvalidPath, UnknownRule or RuleNotApplicable.
Formula apply_equivalence(const Formula& f, const Path& path, std::string_view rule_id, Direction direction,
                          const VarSet& avoid = {});

struct RuleApplication {
  Path path;
  std::string rule_id;
  Direction direction;
};

/// The editing state of the re-express dialog: a formula being reshaped one
/// equivalence at a time, with unbounded undo/redo.
class ReexpressSession {
 public:
  explicit ReexpressSession(Formula origin);

  const Formula& origin() const { return origin_; }
  const Formula& current() const { return history_.current().formula; }
  /// The applications leading from origin to current, in order.
  const std::vector<RuleApplication>& applied() const { return history_.current().applied; }

  /// Strong guarantee: on error the session is unchanged.
  void apply(const Path& path, std::string_view rule_id, Direction direction);
  void undo() { history_.undo(); }
  void redo() { history_.redo(); }
  bool can_undo() const { return history_.can_undo(); }
  bool can_redo() const { return history_.can_redo(); }

 private:
  struct Snapshot {
    Formula formula;
    std::vector<RuleApplication> applied;
  };
  Formula origin_;
  History<Snapshot> history_;
};

}  // namespace setproof
