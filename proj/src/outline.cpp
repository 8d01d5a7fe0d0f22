// Proof outlines: one sentence per step, open goals as placeholders.

#include <string>

#include "setproof/kernel.hpp"

namespace setproof {
namespace {

class OutlineWriter {
 public:
  explicit OutlineWriter(OutlineStyle style) : style_(style) {}

  std::string run(const ProofState& state) {
    if (html()) out_ += "<div class=\"outline\">\n";
    theorem(state);
    if (html()) {
      out_ += "<p class=\"proof\">Proof.</p>\n<ul class=\"proof\">\n";
    } else {
      out_ += "Proof.\n";
    }
    node(*state.root, GoalId(), 1);
    bool done = is_complete(state);
    if (html()) {
      out_ += "</ul>\n";
      if (done) out_ += "<p class=\"qed\">∎</p>\n";
      out_ += "</div>\n";
    } else if (done) {
      out_ += "∎\n";
    }
    return std::move(out_);
  }

 private:
  bool html() const { return style_ == OutlineStyle::Html; }

  std::string f(const Formula& x) const {
    switch (style_) {
      case OutlineStyle::Text: return render(x, Style::Ascii);
      case OutlineStyle::Unicode: return render(x, Style::Unicode);
      case OutlineStyle::Html: return render(x, Style::Html);
    }
    return render(x);
  }

  std::string t(const Term& x) const {
    switch (style_) {
      case OutlineStyle::Text: return render(x, Style::Ascii);
      case OutlineStyle::Unicode: return render(x, Style::Unicode);
      case OutlineStyle::Html: return render(x, Style::Html);
    }
    return render(x);
  }

  std::string plain(const std::string& s) const { return html() ? html_escape(s) : s; }

  std::string label(const std::string& l) const {
    return html() ? "<span class=\"label\">" + html_escape(l) + "</span>" : l;
  }

  std::string labeled(const Given& g) const { return f(g.formula) + " (" + label(g.label) + ")"; }

  void theorem(const ProofState& state) {
    std::string s = "Theorem. ";
    const auto& gs = state.theorem_givens;
    if (!gs.empty()) {
      s += "Suppose ";
      for (std::size_t i = 0; i < gs.size(); ++i) {
        if (i > 0) s += (i + 1 == gs.size()) ? " and " : ", ";
        s += labeled(gs[i]);
      }
      s += ". Then ";
    }
    s += f(state.theorem_goal) + ".";
    if (html()) {
      out_ += "<p class=\"theorem\">" + s + "</p>\n";
    } else {
      out_ += s + "\n";
    }
  }

  void line(std::size_t depth, const char* cls, const std::string& content, const GoalId* id = nullptr) {
    if (html()) {
      out_ += std::string(depth * 2, ' ') + "<li class=\"" + cls + "\"";
      if (id) out_ += " data-goal=\"" + id->str() + "\"";
      out_ += ">" + content + "</li>\n";
    } else {
      out_ += std::string(depth * 2, ' ') + content + "\n";
    }
  }

  void node(const ProofNode& n, const GoalId& id, std::size_t depth) {
    for (const auto& c : n.comments) line(depth, "comment", "[" + plain(c) + "]");
    switch (n.kind) {
      case ProofNode::Kind::Open:
        line(depth, "placeholder", "[Proof of " + f(n.goal) + " goes here.]", &id);
        return;
      case ProofNode::Kind::Closed:
        line(depth, "step", sentence(n));
        return;
      case ProofNode::Kind::Branch:
        break;
    }
    line(depth, "step", sentence(n));
    if (n.children.size() == 1) {
      node(*n.children[0], id.child(0), depth);
      return;
    }
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      const ProofNode& c = *n.children[i];
      std::string head = n.step->kind == StepKind::Cases
                             ? "Case " + std::to_string(i + 1) + ": Suppose " + labeled(c.introduced.at(0)) + "."
                             : "Proof of " + f(c.goal) + ":";
      if (html()) {
        std::string pad(depth * 2, ' ');
        out_ += pad + "<li class=\"subproof\"><span class=\"header\">" + head + "</span>\n" + pad + "<ul>\n";
        node(c, id.child(i), depth + 1);
        out_ += pad + "</ul></li>\n";
      } else {
        line(depth, "header", head);
        node(c, id.child(i), depth + 1);
      }
    }
  }

  std::string sentence(const ProofNode& n) const {
    const StepDescriptor& s = *n.step;
    const Formula& goal = n.goal;
    auto child = [&](std::size_t i) -> const ProofNode& { return *n.children.at(i); };
    auto added = [&](std::size_t i) -> const Given& { return child(0).introduced.at(i); };
    std::string fresh = n.fresh ? plain(*n.fresh) : "";
    switch (s.kind) {
      case StepKind::Suppose: return "Suppose " + labeled(added(0)) + ".";
      case StepKind::LetArbitrary: return "Let " + fresh + " be arbitrary.";
      case StepKind::ExhibitWitness: return "Take " + plain(goal.bound_var()) + " = " + t(*s.term) + ".";
      case StepKind::SplitAnd: return "We prove each conjunct.";
      case StepKind::SplitIff: return "We prove both directions.";
      case StepKind::DoubleInclusion: return "We prove inclusion in each direction.";
      case StepKind::UnfoldSubsetGoal: return "Let " + fresh + " be arbitrary and suppose " + labeled(added(0)) + ".";
      case StepKind::ProveLeft:
      case StepKind::ProveRight: return "We prove " + f(child(0).goal) + ".";
      case StepKind::OrToConditional:
        return "Suppose " + labeled(added(0)) + "; we prove " + f(child(0).goal) + ".";
      case StepKind::ProveByContradiction: return "Suppose " + labeled(added(0)) + " for contradiction.";
      case StepKind::Conclude: return "Since " + label(*s.given) + ", " + f(goal) + ".";
      case StepKind::ContradictionClose:
        return "Since " + label(*s.given) + " and " + label(*s.given2) + ", we have a contradiction.";
      case StepKind::AndElim:
      case StepKind::IffElim:
        return "Since " + label(*s.given) + ", " + labeled(added(0)) + " and " + labeled(added(1)) + ".";
      case StepKind::Cases: return "We consider cases from " + label(*s.given) + ".";
      case StepKind::ExistsElim:
        return "Since " + label(*s.given) + ", choose " + fresh + " such that " + labeled(added(0)) + ".";
      case StepKind::ForallElim: return "Since " + label(*s.given) + ", " + labeled(added(0)) + ".";
      case StepKind::ModusPonens:
      case StepKind::ModusTollens:
        return "Since " + label(*s.given) + " and " + label(*s.given2) + ", " + labeled(added(0)) + ".";
      case StepKind::ReexpressGoal: return "It suffices to prove " + f(child(0).goal) + ".";
      case StepKind::ReexpressGiven: return "Equivalently, " + labeled(added(0)) + ".";
      case StepKind::Comment: break;
    }
    return "";
  }

  OutlineStyle style_;
  std::string out_;
};

}  // namespace

std::string render_outline(const ProofState& state, OutlineStyle style) { return OutlineWriter(style).run(state); }

}  // namespace setproof
