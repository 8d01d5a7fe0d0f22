#include "setproof/kernel.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "setproof/error.hpp"

namespace setproof {

// ---------------------------------------------------------------------------
// Step kinds

namespace {

struct KindInfo {
  StepKind kind;
  std::string_view name;
  StepArguments args;
};

const std::vector<KindInfo>& kind_table() {
  using K = StepKind;
  static const std::vector<KindInfo> table = {
      {K::Suppose, "suppose", {{}, {"label"}}},
      {K::LetArbitrary, "let-arbitrary", {{}, {}}},
      {K::ExhibitWitness, "exhibit-witness", {{"term"}, {}}},
      {K::SplitAnd, "split-and", {{}, {}}},
      {K::SplitIff, "split-iff", {{}, {}}},
      {K::DoubleInclusion, "double-inclusion", {{}, {}}},
      {K::UnfoldSubsetGoal, "unfold-subset-goal", {{}, {"label"}}},
      {K::ProveLeft, "prove-left", {{}, {}}},
      {K::ProveRight, "prove-right", {{}, {}}},
      {K::OrToConditional, "or-to-conditional", {{}, {"label"}}},
      {K::ProveByContradiction, "prove-by-contradiction", {{}, {"label"}}},
      {K::Conclude, "conclude", {{"given"}, {}}},
      {K::ContradictionClose, "contradiction-close", {{"given", "given2"}, {}}},
      {K::AndElim, "and-elim", {{"given"}, {}}},
      {K::IffElim, "iff-elim", {{"given"}, {}}},
      {K::Cases, "cases", {{"given"}, {"label"}}},
      {K::ExistsElim, "exists-elim", {{"given", "witness"}, {"label"}}},
      {K::ForallElim, "forall-elim", {{"given", "term"}, {"label"}}},
      {K::ModusPonens, "modus-ponens", {{"given", "given2"}, {"label"}}},
      {K::ModusTollens, "modus-tollens", {{"given", "given2"}, {"label"}}},
      {K::ReexpressGoal, "reexpress-goal", {{"path", "rule", "dir"}, {}}},
      {K::ReexpressGiven, "reexpress-given", {{"given", "path", "rule", "dir"}, {}}},
      {K::Comment, "comment", {{"text"}, {}}},
  };
  return table;
}

const KindInfo& info(StepKind kind) {
  for (const auto& k : kind_table()) {
    if (k.kind == kind) return k;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown step kind");
}

}  // namespace

const std::vector<StepKind>& all_step_kinds() {
  static const std::vector<StepKind> kinds = [] {
    std::vector<StepKind> out;
    for (const auto& k : kind_table()) out.push_back(k.kind);
    return out;
  }();
  return kinds;
}

std::string_view step_kind_name(StepKind kind) { return info(kind).name; }

std::optional<StepKind> step_kind_from_name(std::string_view name) {
  for (const auto& k : kind_table()) {
    if (k.name == name) return k.kind;
  }
  return std::nullopt;
}

bool is_inference(StepKind kind) {
  switch (kind) {
    case StepKind::AndElim:
    case StepKind::IffElim:
    case StepKind::Cases:
    case StepKind::ExistsElim:
    case StepKind::ForallElim:
    case StepKind::ModusPonens:
    case StepKind::ModusTollens:
    case StepKind::ReexpressGiven:
      return true;
    default:
      return false;
  }
}

const StepArguments& step_arguments(StepKind kind) { return info(kind).args; }

std::string_view given_origin_name(GivenOrigin origin) {
  switch (origin) {
    case GivenOrigin::Hypothesis: return "hypothesis";
    case GivenOrigin::Assumption: return "assumption";
    case GivenOrigin::Instantiation: return "instantiation";
    case GivenOrigin::Inference: return "inference";
    case GivenOrigin::Reexpression: return "reexpression";
  }
  return "hypothesis";
}

// ---------------------------------------------------------------------------
// GoalId

GoalId::GoalId(std::vector<std::size_t> path) : path_(std::move(path)) {
  if (path_.empty() || path_.front() != 0) throw Error(ErrorCode::UnknownGoal, "goal ids start at 0");
}

GoalId GoalId::parse(std::string_view text) {
  std::vector<std::size_t> path;
  std::size_t start = 0;
  while (true) {
    auto dot = text.find('.', start);
    auto piece = text.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), value);
    if (piece.empty() || ec != std::errc() || ptr != piece.data() + piece.size()) {
      throw Error(ErrorCode::UnknownGoal, "malformed goal id '" + std::string(text) + "'");
    }
    path.push_back(value);
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  if (path.front() != 0) throw Error(ErrorCode::UnknownGoal, "no goal '" + std::string(text) + "'");
  return GoalId(std::move(path));
}

GoalId GoalId::child(std::size_t i) const {
  auto p = path_;
  p.push_back(i);
  return GoalId(std::move(p));
}

bool GoalId::is_descendant_of(const GoalId& ancestor) const {
  const auto& a = ancestor.path_;
  return path_.size() >= a.size() && std::equal(a.begin(), a.end(), path_.begin());
}

std::string GoalId::str() const { return path_to_string(path_); }

// ---------------------------------------------------------------------------
// Attribute codec

std::vector<std::pair<std::string, std::string>> step_to_attributes(const StepDescriptor& s) {
  std::vector<std::pair<std::string, std::string>> out;
  out.emplace_back("kind", std::string(step_kind_name(s.kind)));
  out.emplace_back("goal", s.target.str());
  if (s.given) out.emplace_back("given", *s.given);
  if (s.given2) out.emplace_back("given2", *s.given2);
  if (s.term) out.emplace_back("term", render(*s.term));
  if (s.witness) out.emplace_back("witness", *s.witness);
  if (s.label) out.emplace_back("label", *s.label);
  if (s.path) out.emplace_back("path", path_to_string(*s.path));
  if (s.rule) out.emplace_back("rule", *s.rule);
  if (s.direction) out.emplace_back("dir", std::string(direction_name(*s.direction)));
  if (s.text) out.emplace_back("text", *s.text);
  return out;
}

StepDescriptor step_from_attributes(const std::vector<std::pair<std::string, std::string>>& attributes) {
  auto schema_error = [](const std::string& msg) { return Error(ErrorCode::SchemaViolation, msg); };
  StepDescriptor s;
  bool have_kind = false;
  bool have_goal = false;
  std::set<std::string> seen;
  for (const auto& [key, value] : attributes) {
    if (!seen.insert(key).second) throw schema_error("duplicate step attribute '" + key + "'");
    try {
      if (key == "kind") {
        auto kind = step_kind_from_name(value);
        if (!kind) throw schema_error("unknown step kind '" + value + "'");
        s.kind = *kind;
        have_kind = true;
      } else if (key == "goal") {
        s.target = GoalId::parse(value);
        have_goal = true;
      } else if (key == "given") {
        s.given = value;
      } else if (key == "given2") {
        s.given2 = value;
      } else if (key == "term") {
        s.term = parse_term(value);
      } else if (key == "witness") {
        s.witness = value;
      } else if (key == "label") {
        s.label = value;
      } else if (key == "path") {
        s.path = path_from_string(value);
      } else if (key == "rule") {
        s.rule = value;
      } else if (key == "dir") {
        s.direction = parse_direction(value);
      } else if (key == "text") {
        s.text = value;
      } else {
        throw schema_error("unknown step attribute '" + key + "'");
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::SchemaViolation) throw;
      throw schema_error("bad value for step attribute '" + key + "': " + e.what());
    }
  }
  if (!have_kind) throw schema_error("step is missing its kind");
  if (!have_goal) throw schema_error("step '" + std::string(step_kind_name(s.kind)) + "' is missing its goal");
  return s;
}

// ---------------------------------------------------------------------------
// Theorem intake and navigation

namespace {

std::string default_label(std::size_t k) { return "H" + std::to_string(k); }

bool has_label(const std::vector<Given>& givens, std::string_view label) {
  return std::any_of(givens.begin(), givens.end(), [&](const Given& g) { return g.label == label; });
}

std::string next_label(const std::vector<Given>& givens) {
  for (std::size_t k = 1;; ++k) {
    auto label = default_label(k);
    if (!has_label(givens, label)) return label;
  }
}

NodePtr make_node(ProofNode node) { return std::make_shared<const ProofNode>(std::move(node)); }

const ProofNode* find_node(const ProofState& state, const GoalId& id) {
  const ProofNode* node = state.root.get();
  const auto& path = id.path();
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (path[i] >= node->children.size()) return nullptr;
    node = node->children[path[i]].get();
  }
  return node;
}

NodePtr replace_node(const NodePtr& node, const std::vector<std::size_t>& path, std::size_t depth,
                     NodePtr replacement) {
  if (depth == path.size()) return replacement;
  ProofNode copy = *node;
  copy.children[path[depth]] = replace_node(node->children[path[depth]], path, depth + 1, std::move(replacement));
  return make_node(std::move(copy));
}

void collect_open(const NodePtr& node, const GoalId& id, std::vector<OpenGoal>& out) {
  if (node->kind == ProofNode::Kind::Open) {
    out.push_back({id, node->goal, node->givens, node->comments});
    return;
  }
  for (std::size_t i = 0; i < node->children.size(); ++i) collect_open(node->children[i], id.child(i), out);
}

}  // namespace

ProofState new_proof(const std::vector<Formula>& givens, const Formula& goal, const std::vector<std::string>& labels) {
  if (contains_contradiction(goal)) throw Error(ErrorCode::InvalidTheorem, "the goal may not contain contra");
  if (!labels.empty() && labels.size() != givens.size()) {
    throw Error(ErrorCode::InvalidTheorem, "one label is needed per given");
  }
  std::vector<Given> context;
  for (std::size_t i = 0; i < givens.size(); ++i) {
    if (contains_contradiction(givens[i])) {
      throw Error(ErrorCode::InvalidTheorem, "given " + std::to_string(i + 1) + " may not contain contra");
    }
    std::string label = labels.empty() ? default_label(i + 1) : labels[i];
    if (!is_valid_var_name(label) || has_label(context, label)) {
      throw Error(ErrorCode::InvalidTheorem, "bad or repeated given label '" + label + "'");
    }
    context.push_back({std::move(label), givens[i], GivenOrigin::Hypothesis});
  }
  ProofNode root;
  root.goal = goal;
  root.givens = context;
  return ProofState{std::move(context), goal, make_node(std::move(root))};
}

std::vector<OpenGoal> open_goals(const ProofState& state) {
  std::vector<OpenGoal> out;
  collect_open(state.root, GoalId(), out);
  return out;
}

bool is_complete(const ProofState& state) { return open_goals(state).empty(); }

const ProofNode& node_at(const ProofState& state, const GoalId& id) {
  const ProofNode* node = find_node(state, id);
  if (!node) throw Error(ErrorCode::UnknownGoal, "no goal '" + id.str() + "'");
  return *node;
}

// ---------------------------------------------------------------------------
// Applicability

namespace {

const ProofNode& open_node(const ProofState& state, const GoalId& id) {
  const ProofNode& node = node_at(state, id);
  if (node.kind != ProofNode::Kind::Open) throw Error(ErrorCode::UnknownGoal, "goal '" + id.str() + "' is not open");
  return node;
}

const Given& find_given(const ProofNode& node, const std::string& label) {
  for (const auto& g : node.givens) {
    if (g.label == label) return g;
  }
  throw Error(ErrorCode::UnknownGiven, "no given '" + label + "' in this context");
}

bool negates(const Formula& maybe_neg, const Formula& f) {
  return maybe_neg.kind() == Formula::Kind::Not && alpha_eq(maybe_neg.sub(0), f);
}

std::vector<std::string> missing(StepKind kind, const StepDescriptor& partial) {
  std::vector<std::string> needs;
  for (const auto& arg : step_arguments(kind).required) {
    bool present = (arg == "given" && partial.given) || (arg == "given2" && partial.given2) ||
                   (arg == "term" && partial.term) || (arg == "witness" && partial.witness) ||
                   (arg == "path" && partial.path) || (arg == "rule" && partial.rule) ||
                   (arg == "dir" && partial.direction) || (arg == "text" && partial.text);
    if (!present) needs.push_back(arg);
  }
  return needs;
}

StepTemplate make_template(StepKind kind, const GoalId& goal, std::optional<std::string> given = std::nullopt,
                           std::optional<std::string> given2 = std::nullopt) {
  StepDescriptor s;
  s.kind = kind;
  s.target = goal;
  s.given = std::move(given);
  s.given2 = std::move(given2);
  auto needs = missing(kind, s);
  return {std::move(s), std::move(needs)};
}

}  // namespace

std::vector<StepTemplate> applicable_steps(const ProofState& state, const GoalId& goal_id,
                                           const std::optional<std::string>& selected) {
  using K = Formula::Kind;
  const ProofNode& node = open_node(state, goal_id);
  const Formula& goal = node.goal;
  const auto& ctx = node.givens;
  std::vector<StepTemplate> out;
  auto add = [&](StepKind k, std::optional<std::string> g = std::nullopt, std::optional<std::string> g2 = std::nullopt) {
    out.push_back(make_template(k, goal_id, std::move(g), std::move(g2)));
  };

  if (!selected) {
    switch (goal.kind()) {
      case K::Implies: add(StepKind::Suppose); break;
      case K::ForAll: add(StepKind::LetArbitrary); break;
      case K::Exists: add(StepKind::ExhibitWitness); break;
      case K::And: add(StepKind::SplitAnd); break;
      case K::Iff: add(StepKind::SplitIff); break;
      case K::Eq: add(StepKind::DoubleInclusion); break;
      case K::Subset: add(StepKind::UnfoldSubsetGoal); break;
      case K::Or:
        add(StepKind::ProveLeft);
        add(StepKind::ProveRight);
        add(StepKind::OrToConditional);
        break;
      default: break;
    }
    if (goal.kind() != K::Contradiction) add(StepKind::ProveByContradiction);
    for (const auto& g : ctx) {
      if (alpha_eq(g.formula, goal)) add(StepKind::Conclude, g.label);
    }
    if (goal.kind() == K::Contradiction) {
      for (const auto& a : ctx) {
        for (const auto& b : ctx) {
          if (negates(b.formula, a.formula)) add(StepKind::ContradictionClose, a.label, b.label);
        }
      }
    }
    add(StepKind::ReexpressGoal);
    add(StepKind::Comment);
    return out;
  }

  const Given& h = find_given(node, *selected);
  const Formula& f = h.formula;
  if (alpha_eq(f, goal)) add(StepKind::Conclude, h.label);
  if (goal.kind() == K::Contradiction) {
    for (const auto& other : ctx) {
      if (negates(other.formula, f)) add(StepKind::ContradictionClose, h.label, other.label);
      if (negates(f, other.formula)) add(StepKind::ContradictionClose, other.label, h.label);
    }
  }
  switch (f.kind()) {
    case K::And: add(StepKind::AndElim, h.label); break;
    case K::Iff: add(StepKind::IffElim, h.label); break;
    case K::Or: add(StepKind::Cases, h.label); break;
    case K::Exists: add(StepKind::ExistsElim, h.label); break;
    case K::ForAll: add(StepKind::ForallElim, h.label); break;
    default: break;
  }
  // Modus ponens/tollens with the selected given in either premise role.
  for (const auto& other : ctx) {
    if (f.kind() == K::Implies && alpha_eq(other.formula, f.sub(0))) add(StepKind::ModusPonens, h.label, other.label);
    if (other.formula.kind() == K::Implies && alpha_eq(f, other.formula.sub(0))) {
      add(StepKind::ModusPonens, other.label, h.label);
    }
  }
  for (const auto& other : ctx) {
    if (f.kind() == K::Implies && negates(other.formula, f.sub(1))) add(StepKind::ModusTollens, h.label, other.label);
    if (other.formula.kind() == K::Implies && negates(f, other.formula.sub(1))) {
      add(StepKind::ModusTollens, other.label, h.label);
    }
  }
  add(StepKind::ReexpressGiven, h.label);
  // Either role may produce the same pair twice (e.g. H with itself).
  std::vector<StepTemplate> unique;
  for (auto& t : out) {
    bool dup = std::any_of(unique.begin(), unique.end(), [&](const StepTemplate& u) { return u.step == t.step; });
    if (!dup) unique.push_back(std::move(t));
  }
  return unique;
}

// ---------------------------------------------------------------------------
// Step application

namespace {

[[noreturn]] void not_applicable(const StepDescriptor& s, const std::string& why) {
  throw Error(ErrorCode::NotApplicable, std::string(step_kind_name(s.kind)) + ": " + why);
}

void check_arguments(const StepDescriptor& s) {
  const auto& args = step_arguments(s.kind);
  auto allowed = [&](std::string_view name) {
    return std::find(args.required.begin(), args.required.end(), name) != args.required.end() ||
           std::find(args.optional.begin(), args.optional.end(), name) != args.optional.end();
  };
  auto present = std::vector<std::pair<std::string_view, bool>>{
      {"given", s.given.has_value()}, {"given2", s.given2.has_value()}, {"term", s.term.has_value()},
      {"witness", s.witness.has_value()}, {"label", s.label.has_value()}, {"path", s.path.has_value()},
      {"rule", s.rule.has_value()}, {"dir", s.direction.has_value()}, {"text", s.text.has_value()}};
  for (const auto& [name, has] : present) {
    if (has && !allowed(name)) {
      throw Error(ErrorCode::InvalidArgument,
                  std::string(step_kind_name(s.kind)) + " does not take argument '" + std::string(name) + "'");
    }
  }
  auto needs = missing(s.kind, s);
  if (!needs.empty()) {
    throw Error(ErrorCode::ArgumentMissing,
                std::string(step_kind_name(s.kind)) + " needs argument '" + needs.front() + "'");
  }
}

VarSet context_vars(const ProofNode& node) {
  VarSet vars = all_vars(node.goal);
  for (const auto& g : node.givens) {
    auto v = all_vars(g.formula);
    vars.insert(v.begin(), v.end());
  }
  return vars;
}

VarSet context_free_vars(const ProofNode& node) {
  VarSet vars = free_vars(node.goal);
  for (const auto& g : node.givens) {
    auto v = free_vars(g.formula);
    vars.insert(v.begin(), v.end());
  }
  return vars;
}

class StepBuilder {
 public:
  StepBuilder(const ProofNode& leaf, const StepDescriptor& step) : leaf_(leaf), step_(step) {}

  // New given label: the step's own label for the first, Hk otherwise.
  std::string label_for(const std::vector<Given>& ctx, bool first) const {
    if (first && step_.label) {
      if (!is_valid_var_name(*step_.label)) {
        throw Error(ErrorCode::InvalidArgument, "'" + *step_.label + "' is not a valid label");
      }
      if (has_label(ctx, *step_.label)) {
        throw Error(ErrorCode::InvalidArgument, "label '" + *step_.label + "' is already in use");
      }
      return *step_.label;
    }
    return next_label(ctx);
  }

  // A child proving `goal` with `added` appended to this leaf's context.
  NodePtr child(const Formula& goal, const std::vector<std::pair<Formula, GivenOrigin>>& added = {}) const {
    ProofNode c;
    c.goal = goal;
    c.givens = leaf_.givens;
    bool first = true;
    for (const auto& [f, origin] : added) {
      Given g{label_for(c.givens, first), f, origin};
      first = false;
      c.givens.push_back(g);
      c.introduced.push_back(std::move(g));
    }
    return make_node(std::move(c));
  }

  NodePtr branch(std::vector<NodePtr> children, std::optional<VarName> fresh = std::nullopt) const {
    ProofNode b = leaf_;
    b.kind = ProofNode::Kind::Branch;
    b.step = step_;
    b.fresh = std::move(fresh);
    b.children = std::move(children);
    return make_node(std::move(b));
  }

  NodePtr closed() const {
    ProofNode b = leaf_;
    b.kind = ProofNode::Kind::Closed;
    b.step = step_;
    return make_node(std::move(b));
  }

 private:
  const ProofNode& leaf_;
  const StepDescriptor& step_;
};

NodePtr apply_at(const ProofNode& leaf, const StepDescriptor& s) {
  using K = Formula::Kind;
  const Formula& goal = leaf.goal;
  StepBuilder b(leaf, s);
  auto require_goal = [&](K kind, const char* what) {
    if (goal.kind() != kind) not_applicable(s, std::string("the goal is not ") + what);
  };
  auto given = [&](const std::optional<std::string>& label) -> const Formula& {
    return find_given(leaf, *label).formula;
  };

  switch (s.kind) {
    case StepKind::Suppose:
      require_goal(K::Implies, "a conditional");
      return b.branch({b.child(goal.sub(1), {{goal.sub(0), GivenOrigin::Assumption}})});
    case StepKind::LetArbitrary: {
      require_goal(K::ForAll, "a universal statement");
      VarName x = fresh_var(goal.bound_var(), context_vars(leaf));
      return b.branch({b.child(substitute(goal.body(), goal.bound_var(), Term::var(x)))}, x);
    }
    case StepKind::ExhibitWitness:
      require_goal(K::Exists, "an existential statement");
      return b.branch({b.child(substitute(goal.body(), goal.bound_var(), *s.term))});
    case StepKind::SplitAnd:
      require_goal(K::And, "a conjunction");
      return b.branch({b.child(goal.sub(0)), b.child(goal.sub(1))});
    case StepKind::SplitIff:
      require_goal(K::Iff, "a biconditional");
      return b.branch({b.child(Formula::implies(goal.sub(0), goal.sub(1))),
                       b.child(Formula::implies(goal.sub(1), goal.sub(0)))});
    case StepKind::DoubleInclusion:
      require_goal(K::Eq, "an equation");
      return b.branch({b.child(Formula::subset(goal.lhs_term(), goal.rhs_term())),
                       b.child(Formula::subset(goal.rhs_term(), goal.lhs_term()))});
    case StepKind::UnfoldSubsetGoal: {
      require_goal(K::Subset, "an inclusion");
      VarName x = fresh_var("x", context_vars(leaf));
      Term xv = Term::var(x);
      return b.branch({b.child(Formula::in(xv, goal.rhs_term()),
                               {{Formula::in(xv, goal.lhs_term()), GivenOrigin::Assumption}})},
                      x);
    }
    case StepKind::ProveLeft:
      require_goal(K::Or, "a disjunction");
      return b.branch({b.child(goal.sub(0))});
    case StepKind::ProveRight:
      require_goal(K::Or, "a disjunction");
      return b.branch({b.child(goal.sub(1))});
    case StepKind::OrToConditional:
      require_goal(K::Or, "a disjunction");
      return b.branch({b.child(goal.sub(1), {{Formula::negation(goal.sub(0)), GivenOrigin::Assumption}})});
    case StepKind::ProveByContradiction:
      if (goal.kind() == K::Contradiction) not_applicable(s, "the goal is already a contradiction");
      return b.branch({b.child(Formula::contradiction(), {{Formula::negation(goal), GivenOrigin::Assumption}})});
    case StepKind::Conclude:
      if (!alpha_eq(given(s.given), goal)) not_applicable(s, *s.given + " is not the goal");
      return b.closed();
    case StepKind::ContradictionClose: {
      require_goal(K::Contradiction, "a contradiction");
      if (!negates(given(s.given2), given(s.given))) {
        not_applicable(s, *s.given2 + " is not the negation of " + *s.given);
      }
      return b.closed();
    }
    case StepKind::AndElim: {
      const Formula& h = given(s.given);
      if (h.kind() != K::And) not_applicable(s, *s.given + " is not a conjunction");
      return b.branch({b.child(goal, {{h.sub(0), GivenOrigin::Inference}, {h.sub(1), GivenOrigin::Inference}})});
    }
    case StepKind::IffElim: {
      const Formula& h = given(s.given);
      if (h.kind() != K::Iff) not_applicable(s, *s.given + " is not a biconditional");
      return b.branch({b.child(goal, {{Formula::implies(h.sub(0), h.sub(1)), GivenOrigin::Inference},
                                      {Formula::implies(h.sub(1), h.sub(0)), GivenOrigin::Inference}})});
    }
    case StepKind::Cases: {
      const Formula& h = given(s.given);
      if (h.kind() != K::Or) not_applicable(s, *s.given + " is not a disjunction");
      return b.branch({b.child(goal, {{h.sub(0), GivenOrigin::Assumption}}),
                       b.child(goal, {{h.sub(1), GivenOrigin::Assumption}})});
    }
    case StepKind::ExistsElim: {
      const Formula& h = given(s.given);
      if (h.kind() != K::Exists) not_applicable(s, *s.given + " is not an existential statement");
      const VarName& name = *s.witness;
      if (!is_valid_var_name(name)) throw Error(ErrorCode::InvalidArgument, "'" + name + "' is not a valid name");
      if (context_free_vars(leaf).contains(name)) {
        throw Error(ErrorCode::FreshnessViolation, "'" + name + "' already occurs free in this context");
      }
      return b.branch({b.child(goal, {{substitute(h.body(), h.bound_var(), Term::var(name)),
                                       GivenOrigin::Instantiation}})},
                      name);
    }
    case StepKind::ForallElim: {
      const Formula& h = given(s.given);
      if (h.kind() != K::ForAll) not_applicable(s, *s.given + " is not a universal statement");
      return b.branch({b.child(goal, {{substitute(h.body(), h.bound_var(), *s.term), GivenOrigin::Instantiation}})});
    }
    case StepKind::ModusPonens: {
      const Formula& h = given(s.given);
      if (h.kind() != K::Implies) not_applicable(s, *s.given + " is not a conditional");
      if (!alpha_eq(given(s.given2), h.sub(0))) not_applicable(s, *s.given2 + " is not the antecedent of " + *s.given);
      return b.branch({b.child(goal, {{h.sub(1), GivenOrigin::Inference}})});
    }
    case StepKind::ModusTollens: {
      const Formula& h = given(s.given);
      if (h.kind() != K::Implies) not_applicable(s, *s.given + " is not a conditional");
      if (!negates(given(s.given2), h.sub(1))) {
        not_applicable(s, *s.given2 + " is not the negation of the consequent of " + *s.given);
      }
      return b.branch({b.child(goal, {{Formula::negation(h.sub(0)), GivenOrigin::Inference}})});
    }
    case StepKind::ReexpressGoal:
      return b.branch({b.child(apply_equivalence(goal, *s.path, *s.rule, *s.direction, context_free_vars(leaf)))});
    case StepKind::ReexpressGiven: {
      const Formula& h = given(s.given);
      Formula rewritten = apply_equivalence(h, *s.path, *s.rule, *s.direction, context_free_vars(leaf));
      ProofNode c;
      c.goal = goal;
      c.givens = leaf.givens;
      for (auto& g : c.givens) {
        if (g.label == *s.given) {
          g.formula = rewritten;
          g.origin = GivenOrigin::Reexpression;
          c.introduced.push_back(g);
        }
      }
      return b.branch({make_node(std::move(c))});
    }
    case StepKind::Comment: {
      ProofNode c = leaf;
      c.comments.push_back(*s.text);
      return make_node(std::move(c));
    }
  }
  not_applicable(s, "unknown step kind");
}

}  // namespace

ProofState apply_step(const ProofState& state, const StepDescriptor& step) {
  const ProofNode& leaf = open_node(state, step.target);
  check_arguments(step);
  for (const auto& label : {step.given, step.given2}) {
    if (label) find_given(leaf, *label);
  }
  NodePtr replacement = apply_at(leaf, step);
  ProofState next = state;
  next.root = replace_node(state.root, step.target.path(), 1, std::move(replacement));
  return next;
}

}  // namespace setproof
