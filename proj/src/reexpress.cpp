#include "setproof/reexpress.hpp"

#include <algorithm>
#include <set>

#include "setproof/error.hpp"

namespace setproof {

std::string_view direction_name(Direction d) { return d == Direction::Forward ? "forward" : "backward"; }

Direction parse_direction(std::string_view text) {
  if (text == "forward") return Direction::Forward;
  if (text == "backward") return Direction::Backward;
  throw Error(ErrorCode::InvalidArgument, "direction must be 'forward' or 'backward', got '" + std::string(text) + "'");
}

namespace {

// ---------------------------------------------------------------------------
// Schematic patterns

struct TPat {
  enum class Kind { Meta, Bound, Op };
  Kind kind;
  std::string name;  // metavariable or binder id
  Term::Kind op = Term::Kind::Empty;
  std::vector<TPat> kids = {};
};

struct FPat {
  enum class Kind { Meta, Subst, Node };
  Kind kind;
  std::string name;      // formula metavariable, or binder id of a quantifier
  std::string from = {}, to = {};  // Subst: name[from := to]
  Formula::Kind op = Formula::Kind::Contradiction;
  std::vector<TPat> terms = {};
  std::vector<FPat> subs = {};
};

TPat tmeta(std::string n) { return {TPat::Kind::Meta, std::move(n)}; }
TPat bound(std::string b) { return {TPat::Kind::Bound, std::move(b)}; }
TPat op(Term::Kind k, std::vector<TPat> kids) { return {TPat::Kind::Op, {}, k, std::move(kids)}; }

FPat fmeta(std::string n) { return {FPat::Kind::Meta, std::move(n)}; }
FPat subst(std::string n, std::string from, std::string to) {
  return {FPat::Kind::Subst, std::move(n), std::move(from), std::move(to)};
}
FPat rel(Formula::Kind k, TPat l, TPat r) { return {FPat::Kind::Node, {}, {}, {}, k, {std::move(l), std::move(r)}, {}}; }
FPat node(Formula::Kind k, std::vector<FPat> subs, std::string binder = {}) {
  return {FPat::Kind::Node, std::move(binder), {}, {}, k, {}, std::move(subs)};
}

FPat in(TPat l, TPat r) { return rel(Formula::Kind::In, std::move(l), std::move(r)); }
FPat sub(TPat l, TPat r) { return rel(Formula::Kind::Subset, std::move(l), std::move(r)); }
FPat eq(TPat l, TPat r) { return rel(Formula::Kind::Eq, std::move(l), std::move(r)); }
FPat neg(FPat f) { return node(Formula::Kind::Not, {std::move(f)}); }
FPat conj(FPat l, FPat r) { return node(Formula::Kind::And, {std::move(l), std::move(r)}); }
FPat disj(FPat l, FPat r) { return node(Formula::Kind::Or, {std::move(l), std::move(r)}); }
FPat imp(FPat l, FPat r) { return node(Formula::Kind::Implies, {std::move(l), std::move(r)}); }
FPat iff(FPat l, FPat r) { return node(Formula::Kind::Iff, {std::move(l), std::move(r)}); }
FPat all(std::string b, FPat body) { return node(Formula::Kind::ForAll, {std::move(body)}, std::move(b)); }
FPat some(std::string b, FPat body) { return node(Formula::Kind::Exists, {std::move(body)}, std::move(b)); }
FPat unique(std::string b, FPat body) { return node(Formula::Kind::ExistsUnique, {std::move(body)}, std::move(b)); }
FPat bottom() { return node(Formula::Kind::Contradiction, {}); }

struct RuleDef {
  EquivRule info;
  FPat lhs;
  FPat rhs;
  // Binders each metavariable may mention: those it sits under on both sides.
  std::map<std::string, std::set<std::string>> allowed;
};

using Scope = std::vector<std::string>;

void collect_scopes(const TPat& p, Scope& scope, std::map<std::string, std::vector<std::set<std::string>>>& out) {
  if (p.kind == TPat::Kind::Meta) out[p.name].emplace_back(scope.begin(), scope.end());
  for (const auto& k : p.kids) collect_scopes(k, scope, out);
}

void collect_scopes(const FPat& p, Scope& scope, std::map<std::string, std::vector<std::set<std::string>>>& out) {
  if (p.kind == FPat::Kind::Meta) {
    out[p.name].emplace_back(scope.begin(), scope.end());
    return;
  }
  if (p.kind == FPat::Kind::Subst) return;
  for (const auto& t : p.terms) collect_scopes(t, scope, out);
  bool binds = !p.name.empty();
  if (binds) scope.push_back(p.name);
  for (const auto& s : p.subs) collect_scopes(s, scope, out);
  if (binds) scope.pop_back();
}

void collect_metas(const TPat& p, std::set<std::string>& terms, std::set<std::string>& binders) {
  if (p.kind == TPat::Kind::Meta) terms.insert(p.name);
  if (p.kind == TPat::Kind::Bound) binders.insert(p.name);
  for (const auto& k : p.kids) collect_metas(k, terms, binders);
}

void collect_metas(const FPat& p, std::set<std::string>& formulas, std::set<std::string>& terms,
                   std::set<std::string>& binders) {
  if (p.kind != FPat::Kind::Node) {
    formulas.insert(p.name);
    return;
  }
  if (!p.name.empty()) binders.insert(p.name);
  for (const auto& t : p.terms) collect_metas(t, terms, binders);
  for (const auto& s : p.subs) collect_metas(s, formulas, terms, binders);
}

RuleDef make_rule(std::string id, std::string name, RuleKind kind, std::string lhs_text, std::string rhs_text,
                  FPat lhs, FPat rhs) {
  RuleDef def{{std::move(id), std::move(name), kind, std::move(lhs_text), std::move(rhs_text), {}, {}, {}},
              std::move(lhs),
              std::move(rhs),
              {}};
  std::map<std::string, std::vector<std::set<std::string>>> scopes;
  Scope scope;
  collect_scopes(def.lhs, scope, scopes);
  collect_scopes(def.rhs, scope, scopes);
  for (const auto& [meta, sets] : scopes) {
    std::set<std::string> acc = sets.front();
    for (const auto& s : sets) {
      std::set<std::string> both;
      std::set_intersection(acc.begin(), acc.end(), s.begin(), s.end(), std::inserter(both, both.end()));
      acc = std::move(both);
    }
    def.allowed[meta] = std::move(acc);
  }
  std::set<std::string> formulas, terms, binders;
  collect_metas(def.lhs, formulas, terms, binders);
  collect_metas(def.rhs, formulas, terms, binders);
  def.info.formula_metas.assign(formulas.begin(), formulas.end());
  def.info.term_metas.assign(terms.begin(), terms.end());
  def.info.binder_metas.assign(binders.begin(), binders.end());
  return def;
}

const std::vector<RuleDef>& catalog() {
  using TK = Term::Kind;
  static const std::vector<RuleDef> rules = [] {
    const auto x = tmeta("x");
    const auto A = tmeta("A");
    const auto B = tmeta("B");
    const auto F = tmeta("F");
    const auto P = fmeta("P");
    const auto Q = fmeta("Q");
    const auto D = RuleKind::Definitional;
    const auto L = RuleKind::Logical;
    std::vector<RuleDef> r;
    r.push_back(make_rule("member-of-union", "Membership in a union", D, "x ∈ A ∪ B", "x ∈ A ∨ x ∈ B",
                          in(x, op(TK::Union, {A, B})), disj(in(x, A), in(x, B))));
    r.push_back(make_rule("member-of-intersection", "Membership in an intersection", D, "x ∈ A ∩ B",
                          "x ∈ A ∧ x ∈ B", in(x, op(TK::Inter, {A, B})), conj(in(x, A), in(x, B))));
    r.push_back(make_rule("member-of-difference", "Membership in a difference", D, "x ∈ A \\ B",
                          "x ∈ A ∧ ¬x ∈ B", in(x, op(TK::Diff, {A, B})), conj(in(x, A), neg(in(x, B)))));
    r.push_back(make_rule("member-of-power", "Membership in a power set", D, "x ∈ 𝒫(A)", "x ⊆ A",
                          in(x, op(TK::Pow, {A})), sub(x, A)));
    r.push_back(make_rule("member-of-family-union", "Membership in the union of a family", D, "x ∈ ⋃F",
                          "∃S (S ∈ F ∧ x ∈ S)", in(x, op(TK::FamUnion, {F})),
                          some("S", conj(in(bound("S"), F), in(x, bound("S"))))));
    r.push_back(make_rule("member-of-family-intersection", "Membership in the intersection of a family", D,
                          "x ∈ ⋂F", "∀S (S ∈ F → x ∈ S)", in(x, op(TK::FamInter, {F})),
                          all("S", imp(in(bound("S"), F), in(x, bound("S"))))));
    r.push_back(make_rule("member-of-empty", "Membership in the empty set", D, "x ∈ ∅", "⊥",
                          in(x, op(TK::Empty, {})), bottom()));
    r.push_back(make_rule("subset-def", "Definition of subset", D, "A ⊆ B", "∀x (x ∈ A → x ∈ B)", sub(A, B),
                          all("x", imp(in(bound("x"), A), in(bound("x"), B)))));
    r.push_back(make_rule("set-equality", "Extensionality", D, "A = B", "∀x (x ∈ A ↔ x ∈ B)", eq(A, B),
                          all("x", iff(in(bound("x"), A), in(bound("x"), B)))));
    r.push_back(make_rule("exists-unique-def", "Definition of unique existence", D, "∃!x P",
                          "∃x (P ∧ ∀y (P[x:=y] → y = x))", unique("x", P),
                          some("x", conj(P, all("y", imp(subst("P", "x", "y"), eq(bound("y"), bound("x"))))))));
    r.push_back(make_rule("de-morgan-and", "De Morgan (conjunction)", L, "¬(P ∧ Q)", "¬P ∨ ¬Q", neg(conj(P, Q)),
                          disj(neg(P), neg(Q))));
    r.push_back(make_rule("de-morgan-or", "De Morgan (disjunction)", L, "¬(P ∨ Q)", "¬P ∧ ¬Q", neg(disj(P, Q)),
                          conj(neg(P), neg(Q))));
    r.push_back(make_rule("quantifier-negation", "Quantifier negation (universal)", L, "¬∀x P", "∃x ¬P",
                          neg(all("x", P)), some("x", neg(P))));
    r.push_back(make_rule("quantifier-negation-exists", "Quantifier negation (existential)", L, "¬∃x P",
                          "∀x ¬P", neg(some("x", P)), all("x", neg(P))));
    r.push_back(make_rule("double-negation", "Double negation", L, "¬¬P", "P", neg(neg(P)), P));
    r.push_back(make_rule("conditional-law", "Conditional law", L, "P → Q", "¬P ∨ Q", imp(P, Q), disj(neg(P), Q)));
    r.push_back(make_rule("negated-conditional", "Negated conditional", L, "¬(P → Q)", "P ∧ ¬Q", neg(imp(P, Q)),
                          conj(P, neg(Q))));
    r.push_back(make_rule("contrapositive", "Contrapositive", L, "P → Q", "¬Q → ¬P", imp(P, Q),
                          imp(neg(Q), neg(P))));
    r.push_back(make_rule("biconditional-split", "Biconditional as two conditionals", L, "P ↔ Q",
                          "(P → Q) ∧ (Q → P)", iff(P, Q), conj(imp(P, Q), imp(Q, P))));
    return r;
  }();
  return rules;
}

const RuleDef& find_def(std::string_view id) {
  for (const auto& r : catalog()) {
    if (r.info.id == id) return r;
  }
  throw Error(ErrorCode::UnknownRule, "unknown rule '" + std::string(id) + "'");
}

// ---------------------------------------------------------------------------
// Matching

class Matcher {
 public:
  Matcher(const RuleDef& rule, MetaAssignment& values) : rule_(rule), v_(values) {}

  bool formula(const FPat& p, const Formula& f) {
    switch (p.kind) {
      case FPat::Kind::Meta: {
        if (auto it = v_.formulas.find(p.name); it != v_.formulas.end()) return alpha_eq(it->second, f);
        if (!independent(p.name, free_vars(f))) return false;
        v_.formulas.emplace(p.name, f);
        return true;
      }
      case FPat::Kind::Subst: {
        auto it = v_.formulas.find(p.name);
        if (it == v_.formulas.end()) return false;
        const VarName& from = v_.binders.at(p.from);
        const VarName& to = v_.binders.at(p.to);
        if (free_vars(it->second).contains(to)) return false;
        return alpha_eq(substitute(it->second, from, Term::var(to)), f);
      }
      case FPat::Kind::Node:
        break;
    }
    if (p.op != f.kind()) return false;
    if (f.is_atom()) return term(p.terms[0], f.lhs_term()) && term(p.terms[1], f.rhs_term());
    if (f.is_quantifier()) {
      const VarName& name = f.bound_var();
      if (auto it = v_.binders.find(p.name); it != v_.binders.end()) {
        if (it->second != name) return false;
      } else {
        // Nested pattern binders must not shadow each other.
        for (const auto& b : scope_) {
          if (v_.binders.at(b) == name) return false;
        }
        v_.binders.emplace(p.name, name);
      }
      scope_.push_back(p.name);
      bool ok = formula(p.subs[0], f.body());
      scope_.pop_back();
      return ok;
    }
    for (std::size_t i = 0; i < p.subs.size(); ++i) {
      if (!formula(p.subs[i], f.sub(i))) return false;
    }
    return true;
  }

 private:
  bool term(const TPat& p, const Term& t) {
    switch (p.kind) {
      case TPat::Kind::Meta: {
        if (auto it = v_.terms.find(p.name); it != v_.terms.end()) return it->second == t;
        if (!independent(p.name, free_vars(t))) return false;
        v_.terms.emplace(p.name, t);
        return true;
      }
      case TPat::Kind::Bound:
        return t.kind() == Term::Kind::Var && t.name() == v_.binders.at(p.name);
      case TPat::Kind::Op:
        break;
    }
    if (p.op != t.kind()) return false;
    for (std::size_t i = 0; i < p.kids.size(); ++i) {
      if (!term(p.kids[i], t.child(i))) return false;
    }
    return true;
  }

  // A metavariable may only mention the binders it sits under on both sides.
  bool independent(const std::string& meta, const VarSet& fv) const {
    const auto& allowed = rule_.allowed.at(meta);
    for (const auto& b : scope_) {
      if (!allowed.contains(b) && fv.contains(v_.binders.at(b))) return false;
    }
    return true;
  }

  const RuleDef& rule_;
  MetaAssignment& v_;
  Scope scope_;
};

// ---------------------------------------------------------------------------
// Instantiation

class Builder {
 public:
  Builder(MetaAssignment& values, VarSet avoid) : v_(values), avoid_(std::move(avoid)) {
    for (const auto& [_, f] : v_.formulas) {
      auto fv = free_vars(f);
      avoid_.insert(fv.begin(), fv.end());
    }
    for (const auto& [_, t] : v_.terms) {
      auto fv = free_vars(t);
      avoid_.insert(fv.begin(), fv.end());
    }
    for (const auto& [_, name] : v_.binders) avoid_.insert(name);
  }

  Formula formula(const FPat& p) {
    switch (p.kind) {
      case FPat::Kind::Meta: {
        auto it = v_.formulas.find(p.name);
        if (it == v_.formulas.end()) {
          throw Error(ErrorCode::InvalidArgument, "no value for formula placeholder " + p.name);
        }
        return it->second;
      }
      case FPat::Kind::Subst:
        return substitute(v_.formulas.at(p.name), binder(p.from), Term::var(binder(p.to)));
      case FPat::Kind::Node:
        break;
    }
    if (p.terms.size() == 2) return Formula::relation(p.op, term(p.terms[0]), term(p.terms[1]));
    switch (p.op) {
      case Formula::Kind::Contradiction:
        return Formula::contradiction();
      case Formula::Kind::Not:
        return Formula::negation(formula(p.subs[0]));
      case Formula::Kind::ForAll:
      case Formula::Kind::Exists:
      case Formula::Kind::ExistsUnique: {
        VarName name = binder(p.name);
        return Formula::quantifier(p.op, name, formula(p.subs[0]));
      }
      default:
        return Formula::connective(p.op, formula(p.subs[0]), formula(p.subs[1]));
    }
  }

 private:
  const VarName& binder(const std::string& id) {
    auto it = v_.binders.find(id);
    if (it == v_.binders.end()) {
      VarName name = fresh_var(id, avoid_);
      avoid_.insert(name);
      it = v_.binders.emplace(id, name).first;
    }
    return it->second;
  }

  Term term(const TPat& p) {
    switch (p.kind) {
      case TPat::Kind::Meta: {
        auto it = v_.terms.find(p.name);
        if (it == v_.terms.end()) it = v_.terms.emplace(p.name, Term::empty()).first;
        return it->second;
      }
      case TPat::Kind::Bound:
        return Term::var(binder(p.name));
      case TPat::Kind::Op:
        break;
    }
    switch (p.kids.size()) {
      case 0: return Term::empty();
      case 1: return Term::unary(p.op, term(p.kids[0]));
      default: return Term::binary(p.op, term(p.kids[0]), term(p.kids[1]));
    }
  }

  MetaAssignment& v_;
  VarSet avoid_;
};

Formula formula_at(const Formula& f, const Path& path) {
  Subtree node = subformula_at(f, path);
  if (!std::holds_alternative<Formula>(node)) {
    throw Error(ErrorCode::InvalidPath, "path '" + path_to_string(path) + "' addresses a term, not a formula");
  }
  return std::get<Formula>(node);
}

std::optional<Formula> try_rewrite(const RuleDef& rule, const Formula& whole, const Path& path, const Formula& target,
                                   Direction dir, const VarSet& extra_avoid) {
  MetaAssignment values;
  const FPat& source = dir == Direction::Forward ? rule.lhs : rule.rhs;
  const FPat& result = dir == Direction::Forward ? rule.rhs : rule.lhs;
  Matcher m(rule, values);
  if (!m.formula(source, target)) return std::nullopt;
  VarSet avoid = free_vars(whole);
  VarSet local = free_vars(target);
  avoid.insert(local.begin(), local.end());
  avoid.insert(extra_avoid.begin(), extra_avoid.end());
  Builder b(values, std::move(avoid));
  return replace_at(whole, path, b.formula(result));
}

}  // namespace

const std::vector<EquivRule>& equivalence_rules() {
  static const std::vector<EquivRule> infos = [] {
    std::vector<EquivRule> out;
    for (const auto& r : catalog()) out.push_back(r.info);
    return out;
  }();
  return infos;
}

const EquivRule& find_rule(std::string_view id) {
  for (const auto& r : equivalence_rules()) {
    if (r.id == id) return r;
  }
  throw Error(ErrorCode::UnknownRule, "unknown rule '" + std::string(id) + "'");
}

Formula instantiate_rule_side(const EquivRule& rule, bool lhs, const MetaAssignment& values) {
  const RuleDef& def = find_def(rule.id);
  MetaAssignment v = values;
  Builder b(v, {});
  return b.formula(lhs ? def.lhs : def.rhs);
}

std::vector<EquivalenceOption> applicable_equivalences(const Formula& f, const Path& path, const VarSet& avoid) {
  Formula target = formula_at(f, path);
  const auto& infos = equivalence_rules();
  std::vector<EquivalenceOption> out;
  const auto& defs = catalog();
  for (std::size_t i = 0; i < defs.size(); ++i) {
    for (Direction d : {Direction::Forward, Direction::Backward}) {
      if (auto preview = try_rewrite(defs[i], f, path, target, d, avoid)) out.push_back({&infos[i], d, *preview});
    }
  }
  return out;
}

Formula apply_equivalence(const Formula& f, const Path& path, std::string_view rule_id, Direction direction,
                          const VarSet& avoid) {
  Formula target = formula_at(f, path);
  const RuleDef& rule = find_def(rule_id);
  auto result = try_rewrite(rule, f, path, target, direction, avoid);
  if (!result) {
    throw Error(ErrorCode::RuleNotApplicable, "rule '" + std::string(rule_id) + "' (" +
                                                  std::string(direction_name(direction)) +
                                                  ") does not match at path '" + path_to_string(path) + "'");
  }
  return *result;
}

// ---------------------------------------------------------------------------

ReexpressSession::ReexpressSession(Formula origin) : origin_(origin), history_(Snapshot{std::move(origin), {}}) {}

void ReexpressSession::apply(const Path& path, std::string_view rule_id, Direction direction) {
  Formula next = apply_equivalence(current(), path, rule_id, direction);
  auto applied_now = applied();
  applied_now.push_back({path, std::string(rule_id), direction});
  history_.push(Snapshot{std::move(next), std::move(applied_now)});
}

}  // namespace setproof
