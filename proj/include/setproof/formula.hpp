#pragma once

// Formula and term syntax trees for elementary set theory, plus the variable
// machinery (free variables, capture-avoiding substitution, alpha-equivalence)
// and path addressing of subtrees.
//
// Terms and formulas are immutable handles over shared nodes: copying is
// cheap and rewriting shares every untouched subtree.

#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace setproof {

using VarName = std::string;
using VarSet = std::set<VarName>;

/// True iff `name` is a letter followed by letters, digits or underscores and
/// is not a reserved word of the formula language.
bool is_valid_var_name(std::string_view name);
bool is_reserved_word(std::string_view word);

class Term {
 public:
  enum class Kind { Var, Empty, Union, Inter, Diff, Pow, FamUnion, FamInter };

  static Term var(VarName name);
  static Term empty();
  static Term set_union(Term l, Term r);
  static Term set_inter(Term l, Term r);
  static Term set_diff(Term l, Term r);
  static Term pow(Term t);
  static Term fam_union(Term t);
  static Term fam_inter(Term t);
  static Term binary(Kind kind, Term l, Term r);
  static Term unary(Kind kind, Term t);

  Kind kind() const { return node_->kind; }
  const VarName& name() const { return node_->name; }
  std::size_t arity() const { return node_->children.size(); }
  const Term& child(std::size_t i) const { return node_->children.at(i); }
  const std::vector<Term>& children() const { return node_->children; }

  bool is_binary() const;
  bool same_node(const Term& other) const { return node_ == other.node_; }

  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node {
    Kind kind;
    VarName name;
    std::vector<Term> children;
  };
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

class Formula {
 public:
  enum class Kind {
    In,
    Subset,
    Eq,
    Contradiction,
    Not,
    And,
    Or,
    Implies,
    Iff,
    ForAll,
    Exists,
    ExistsUnique,
  };

  /// The contradiction ⊥.
  Formula();

  static Formula in(Term elem, Term set);
  static Formula subset(Term l, Term r);
  static Formula eq(Term l, Term r);
  static Formula relation(Kind kind, Term l, Term r);
  static Formula contradiction();
  static Formula negation(Formula f);
  static Formula conj(Formula l, Formula r);
  static Formula disj(Formula l, Formula r);
  static Formula implies(Formula l, Formula r);
  static Formula iff(Formula l, Formula r);
  static Formula connective(Kind kind, Formula l, Formula r);
  static Formula forall(VarName v, Formula body);
  static Formula exists(VarName v, Formula body);
  static Formula exists_unique(VarName v, Formula body);
  static Formula quantifier(Kind kind, VarName v, Formula body);

  Kind kind() const { return node_->kind; }

  bool is_atom() const;        // In, Subset, Eq
  bool is_connective() const;  // And, Or, Implies, Iff
  bool is_quantifier() const;  // ForAll, Exists, ExistsUnique

  /// Relation operands; valid for atoms only.
  const Term& lhs_term() const { return node_->terms.at(0); }
  const Term& rhs_term() const { return node_->terms.at(1); }
  /// Subformulas: one for Not and quantifiers, two for connectives.
  const Formula& sub(std::size_t i) const { return node_->subs.at(i); }
  const Formula& body() const { return node_->subs.at(0); }
  const VarName& bound_var() const { return node_->name; }

  /// Number of addressable children (terms for atoms, subformulas otherwise).
  std::size_t arity() const;

  bool same_node(const Formula& other) const { return node_ == other.node_; }

  /// Structural (node-by-node) equality. Bound names must match too; see
  /// alpha_eq for equality up to bound renaming.
  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node {
    Kind kind;
    VarName name;
    std::vector<Term> terms;
    std::vector<Formula> subs;
  };
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Child-index path from the root of a formula. Quantifier bodies are child 0;
/// relation operands are children 0 and 1.
using Path = std::vector<std::size_t>;

/// A subtree of a formula: either a formula or a term position.
using Subtree = std::variant<Formula, Term>;

std::string path_to_string(const Path& path);
/// Parses "0.1.0"; the empty string is the root path.
Path path_from_string(std::string_view text);

VarSet free_vars(const Term& t);
VarSet free_vars(const Formula& f);
/// Every variable name occurring in `f`, free or bound.
VarSet all_vars(const Formula& f);

/// `base` when it is not in `avoid`, otherwise the first of base0, base1, ...
/// that is not.
VarName fresh_var(const VarName& base, const VarSet& avoid);

Term substitute(const Term& t, const VarName& v, const Term& replacement);
/// Capture-avoiding substitution of `replacement` for the free occurrences of
/// `v`. A binder that would capture a free variable of `replacement` is
/// renamed with fresh_var.
Formula substitute(const Formula& f, const VarName& v, const Term& replacement);

bool alpha_eq(const Formula& f, const Formula& g);

/// Throws InvalidPath when an index is out of range.
Subtree subformula_at(const Formula& f, const Path& path);
/// Throws InvalidPath or CategoryMismatch.
Formula replace_at(const Formula& f, const Path& path, const Subtree& replacement);

bool contains_contradiction(const Formula& f);

}  // namespace setproof
