#include "setproof/formula.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>

#include "setproof/error.hpp"

namespace setproof {

namespace {

constexpr std::array<std::string_view, 10> kReserved = {
    "forall", "exists", "in", "sub", "union", "inter", "pow", "Union", "Inter", "contra"};

}  // namespace

bool is_reserved_word(std::string_view word) {
  return std::find(kReserved.begin(), kReserved.end(), word) != kReserved.end();
}

bool is_valid_var_name(std::string_view name) {
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name.front()))) return false;
  for (char c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return !is_reserved_word(name);
}

// ---------------------------------------------------------------------------
// Term

Term Term::var(VarName name) {
  return Term(std::make_shared<const Node>(Node{Kind::Var, std::move(name), {}}));
}

Term Term::empty() {
  static const Term kEmpty(std::make_shared<const Node>(Node{Kind::Empty, {}, {}}));
  return kEmpty;
}

Term Term::binary(Kind kind, Term l, Term r) {
  return Term(std::make_shared<const Node>(Node{kind, {}, {std::move(l), std::move(r)}}));
}

Term Term::unary(Kind kind, Term t) {
  return Term(std::make_shared<const Node>(Node{kind, {}, {std::move(t)}}));
}

Term Term::set_union(Term l, Term r) { return binary(Kind::Union, std::move(l), std::move(r)); }
Term Term::set_inter(Term l, Term r) { return binary(Kind::Inter, std::move(l), std::move(r)); }
Term Term::set_diff(Term l, Term r) { return binary(Kind::Diff, std::move(l), std::move(r)); }
Term Term::pow(Term t) { return unary(Kind::Pow, std::move(t)); }
Term Term::fam_union(Term t) { return unary(Kind::FamUnion, std::move(t)); }
Term Term::fam_inter(Term t) { return unary(Kind::FamInter, std::move(t)); }

bool Term::is_binary() const {
  return kind() == Kind::Union || kind() == Kind::Inter || kind() == Kind::Diff;
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  return a.kind() == b.kind() && a.name() == b.name() && a.children() == b.children();
}

// ---------------------------------------------------------------------------
// Formula

Formula Formula::relation(Kind kind, Term l, Term r) {
  return Formula(std::make_shared<const Node>(Node{kind, {}, {std::move(l), std::move(r)}, {}}));
}

Formula Formula::in(Term elem, Term set) { return relation(Kind::In, std::move(elem), std::move(set)); }
Formula Formula::subset(Term l, Term r) { return relation(Kind::Subset, std::move(l), std::move(r)); }
Formula Formula::eq(Term l, Term r) { return relation(Kind::Eq, std::move(l), std::move(r)); }

Formula::Formula() : Formula(contradiction()) {}

Formula Formula::contradiction() {
  static const Formula kBottom(std::make_shared<const Node>(Node{Kind::Contradiction, {}, {}, {}}));
  return kBottom;
}

Formula Formula::negation(Formula f) {
  return Formula(std::make_shared<const Node>(Node{Kind::Not, {}, {}, {std::move(f)}}));
}

Formula Formula::connective(Kind kind, Formula l, Formula r) {
  return Formula(std::make_shared<const Node>(Node{kind, {}, {}, {std::move(l), std::move(r)}}));
}

Formula Formula::conj(Formula l, Formula r) { return connective(Kind::And, std::move(l), std::move(r)); }
Formula Formula::disj(Formula l, Formula r) { return connective(Kind::Or, std::move(l), std::move(r)); }
Formula Formula::implies(Formula l, Formula r) {
  return connective(Kind::Implies, std::move(l), std::move(r));
}
Formula Formula::iff(Formula l, Formula r) { return connective(Kind::Iff, std::move(l), std::move(r)); }

Formula Formula::quantifier(Kind kind, VarName v, Formula body) {
  return Formula(std::make_shared<const Node>(Node{kind, std::move(v), {}, {std::move(body)}}));
}

Formula Formula::forall(VarName v, Formula body) {
  return quantifier(Kind::ForAll, std::move(v), std::move(body));
}
Formula Formula::exists(VarName v, Formula body) {
  return quantifier(Kind::Exists, std::move(v), std::move(body));
}
Formula Formula::exists_unique(VarName v, Formula body) {
  return quantifier(Kind::ExistsUnique, std::move(v), std::move(body));
}

bool Formula::is_atom() const {
  return kind() == Kind::In || kind() == Kind::Subset || kind() == Kind::Eq;
}

bool Formula::is_connective() const {
  return kind() == Kind::And || kind() == Kind::Or || kind() == Kind::Implies || kind() == Kind::Iff;
}

bool Formula::is_quantifier() const {
  return kind() == Kind::ForAll || kind() == Kind::Exists || kind() == Kind::ExistsUnique;
}

std::size_t Formula::arity() const {
  return is_atom() ? node_->terms.size() : node_->subs.size();
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  return a.kind() == b.kind() && a.node_->name == b.node_->name && a.node_->terms == b.node_->terms &&
         a.node_->subs == b.node_->subs;
}

// ---------------------------------------------------------------------------
// Paths

std::string path_to_string(const Path& path) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(path[i]);
  }
  return out;
}

Path path_from_string(std::string_view text) {
  Path path;
  if (text.empty()) return path;
  std::size_t start = 0;
  while (true) {
    auto dot = text.find('.', start);
    auto piece = text.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), value);
    if (piece.empty() || ec != std::errc() || ptr != piece.data() + piece.size()) {
      throw Error(ErrorCode::InvalidPath, "malformed path '" + std::string(text) + "'");
    }
    path.push_back(value);
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return path;
}

// ---------------------------------------------------------------------------
// Variables

namespace {

void collect_vars(const Term& t, VarSet& out) {
  if (t.kind() == Term::Kind::Var) {
    out.insert(t.name());
    return;
  }
  for (const auto& c : t.children()) collect_vars(c, out);
}

void collect_free(const Formula& f, VarSet& bound, VarSet& out) {
  if (f.is_atom()) {
    VarSet vars;
    collect_vars(f.lhs_term(), vars);
    collect_vars(f.rhs_term(), vars);
    for (const auto& v : vars) {
      if (!bound.contains(v)) out.insert(v);
    }
    return;
  }
  if (f.is_quantifier()) {
    bool fresh = bound.insert(f.bound_var()).second;
    collect_free(f.body(), bound, out);
    if (fresh) bound.erase(f.bound_var());
    return;
  }
  for (std::size_t i = 0; i < f.arity(); ++i) collect_free(f.sub(i), bound, out);
}

void collect_all(const Formula& f, VarSet& out) {
  if (f.is_atom()) {
    collect_vars(f.lhs_term(), out);
    collect_vars(f.rhs_term(), out);
    return;
  }
  if (f.is_quantifier()) out.insert(f.bound_var());
  for (std::size_t i = 0; i < f.arity(); ++i) collect_all(f.sub(i), out);
}

}  // namespace

VarSet free_vars(const Term& t) {
  VarSet out;
  collect_vars(t, out);
  return out;
}

VarSet free_vars(const Formula& f) {
  VarSet bound;
  VarSet out;
  collect_free(f, bound, out);
  return out;
}

VarSet all_vars(const Formula& f) {
  VarSet out;
  collect_all(f, out);
  return out;
}

VarName fresh_var(const VarName& base, const VarSet& avoid) {
  if (!avoid.contains(base)) return base;
  for (std::size_t i = 0;; ++i) {
    VarName candidate = base + std::to_string(i);
    if (!avoid.contains(candidate)) return candidate;
  }
}

Term substitute(const Term& t, const VarName& v, const Term& replacement) {
  if (t.kind() == Term::Kind::Var) return t.name() == v ? replacement : t;
  if (t.arity() == 0) return t;
  bool changed = false;
  std::vector<Term> kids;
  kids.reserve(t.arity());
  for (const auto& c : t.children()) {
    kids.push_back(substitute(c, v, replacement));
    changed = changed || !kids.back().same_node(c);
  }
  if (!changed) return t;
  return kids.size() == 1 ? Term::unary(t.kind(), kids[0]) : Term::binary(t.kind(), kids[0], kids[1]);
}

Formula substitute(const Formula& f, const VarName& v, const Term& replacement) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::In:
    case K::Subset:
    case K::Eq: {
      Term l = substitute(f.lhs_term(), v, replacement);
      Term r = substitute(f.rhs_term(), v, replacement);
      if (l.same_node(f.lhs_term()) && r.same_node(f.rhs_term())) return f;
      return Formula::relation(f.kind(), std::move(l), std::move(r));
    }
    case K::Contradiction:
      return f;
    case K::Not: {
      Formula s = substitute(f.sub(0), v, replacement);
      return s.same_node(f.sub(0)) ? f : Formula::negation(std::move(s));
    }
    case K::And:
    case K::Or:
    case K::Implies:
    case K::Iff: {
      Formula l = substitute(f.sub(0), v, replacement);
      Formula r = substitute(f.sub(1), v, replacement);
      if (l.same_node(f.sub(0)) && r.same_node(f.sub(1))) return f;
      return Formula::connective(f.kind(), std::move(l), std::move(r));
    }
    case K::ForAll:
    case K::Exists:
    case K::ExistsUnique: {
      const VarName& bound = f.bound_var();
      if (bound == v) return f;
      VarSet body_free = free_vars(f.body());
      if (!body_free.contains(v)) return f;
      VarSet repl_free = free_vars(replacement);
      VarName name = bound;
      Formula body = f.body();
      if (repl_free.contains(bound)) {
        VarSet avoid = repl_free;
        avoid.insert(body_free.begin(), body_free.end());
        avoid.insert(v);
        name = fresh_var(bound, avoid);
        body = substitute(body, bound, Term::var(name));
      }
      return Formula::quantifier(f.kind(), name, substitute(body, v, replacement));
    }
  }
  return f;
}

// ---------------------------------------------------------------------------
// Alpha-equivalence

namespace {

using Binders = std::vector<VarName>;

// Index of the innermost binder of `name`, or -1 when free.
long binder_index(const Binders& binders, const VarName& name) {
  for (std::size_t i = binders.size(); i-- > 0;) {
    if (binders[i] == name) return static_cast<long>(i);
  }
  return -1;
}

bool alpha_eq_term(const Term& a, const Term& b, const Binders& ba, const Binders& bb) {
  if (a.kind() != b.kind()) return false;
  if (a.kind() == Term::Kind::Var) {
    long ia = binder_index(ba, a.name());
    long ib = binder_index(bb, b.name());
    if (ia != ib) return false;
    return ia >= 0 || a.name() == b.name();
  }
  for (std::size_t i = 0; i < a.arity(); ++i) {
    if (!alpha_eq_term(a.child(i), b.child(i), ba, bb)) return false;
  }
  return true;
}

bool alpha_eq_rec(const Formula& f, const Formula& g, Binders& bf, Binders& bg) {
  if (f.kind() != g.kind()) return false;
  if (f.same_node(g) && bf == bg) return true;
  if (f.is_atom()) {
    return alpha_eq_term(f.lhs_term(), g.lhs_term(), bf, bg) &&
           alpha_eq_term(f.rhs_term(), g.rhs_term(), bf, bg);
  }
  if (f.is_quantifier()) {
    bf.push_back(f.bound_var());
    bg.push_back(g.bound_var());
    bool same = alpha_eq_rec(f.body(), g.body(), bf, bg);
    bf.pop_back();
    bg.pop_back();
    return same;
  }
  for (std::size_t i = 0; i < f.arity(); ++i) {
    if (!alpha_eq_rec(f.sub(i), g.sub(i), bf, bg)) return false;
  }
  return true;
}

}  // namespace

bool alpha_eq(const Formula& f, const Formula& g) {
  Binders bf;
  Binders bg;
  return alpha_eq_rec(f, g, bf, bg);
}

// ---------------------------------------------------------------------------
// Path addressing

namespace {

[[noreturn]] void invalid_path(const Path& path) {
  throw Error(ErrorCode::InvalidPath, "path '" + path_to_string(path) + "' does not address a node");
}

Term replace_in_term(const Term& t, const Path& path, std::size_t depth, const Term& replacement) {
  if (depth == path.size()) return replacement;
  std::size_t i = path[depth];
  if (i >= t.arity()) invalid_path(path);
  Term kid = replace_in_term(t.child(i), path, depth + 1, replacement);
  if (t.arity() == 1) return Term::unary(t.kind(), kid);
  return i == 0 ? Term::binary(t.kind(), kid, t.child(1)) : Term::binary(t.kind(), t.child(0), kid);
}

Formula replace_rec(const Formula& f, const Path& path, std::size_t depth, const Subtree& replacement) {
  if (depth == path.size()) {
    if (!std::holds_alternative<Formula>(replacement)) {
      throw Error(ErrorCode::CategoryMismatch, "cannot put a term at a formula position");
    }
    return std::get<Formula>(replacement);
  }
  std::size_t i = path[depth];
  if (i >= f.arity()) invalid_path(path);
  if (f.is_atom()) {
    if (depth + 1 == path.size() && !std::holds_alternative<Term>(replacement)) {
      throw Error(ErrorCode::CategoryMismatch, "cannot put a formula at a term position");
    }
    Term target = i == 0 ? f.lhs_term() : f.rhs_term();
    // Validate the whole path before checking the category below the atom.
    const Term* probe = &target;
    for (std::size_t d = depth + 1; d < path.size(); ++d) {
      if (path[d] >= probe->arity()) invalid_path(path);
      probe = &probe->child(path[d]);
    }
    if (!std::holds_alternative<Term>(replacement)) {
      throw Error(ErrorCode::CategoryMismatch, "cannot put a formula at a term position");
    }
    Term kid = replace_in_term(target, path, depth + 1, std::get<Term>(replacement));
    return i == 0 ? Formula::relation(f.kind(), kid, f.rhs_term())
                  : Formula::relation(f.kind(), f.lhs_term(), kid);
  }
  Formula kid = replace_rec(f.sub(i), path, depth + 1, replacement);
  if (f.is_quantifier()) return Formula::quantifier(f.kind(), f.bound_var(), kid);
  if (f.kind() == Formula::Kind::Not) return Formula::negation(kid);
  return i == 0 ? Formula::connective(f.kind(), kid, f.sub(1)) : Formula::connective(f.kind(), f.sub(0), kid);
}

}  // namespace

Subtree subformula_at(const Formula& f, const Path& path) {
  Formula node = f;
  std::size_t depth = 0;
  for (; depth < path.size(); ++depth) {
    std::size_t i = path[depth];
    if (i >= node.arity()) invalid_path(path);
    if (node.is_atom()) break;
    node = node.sub(i);
  }
  if (depth == path.size()) return node;
  Term term = path[depth] == 0 ? node.lhs_term() : node.rhs_term();
  for (++depth; depth < path.size(); ++depth) {
    if (path[depth] >= term.arity()) invalid_path(path);
    term = term.child(path[depth]);
  }
  return term;
}

Formula replace_at(const Formula& f, const Path& path, const Subtree& replacement) {
  return replace_rec(f, path, 0, replacement);
}

bool contains_contradiction(const Formula& f) {
  if (f.kind() == Formula::Kind::Contradiction) return true;
  if (f.is_atom()) return false;
  for (std::size_t i = 0; i < f.arity(); ++i) {
    if (contains_contradiction(f.sub(i))) return true;
  }
  return false;
}

}  // namespace setproof
