#include "setproof/session.hpp"

#include <expat.h>

#include <algorithm>
#include <memory>

#include "setproof/error.hpp"

namespace setproof {
namespace {

ProofState start_state(const Theorem& t) { return new_proof(t.givens, t.goal, t.labels); }

}  // namespace

Session::Session(Theorem theorem)
    : theorem_(std::move(theorem)), history_(Snapshot{start_state(theorem_), {}}) {}

std::vector<StepDescriptor> Session::redo_log() const { return {redo_log_.rbegin(), redo_log_.rend()}; }

void Session::apply(const StepDescriptor& step) {
  ProofState next = apply_step(state(), step);
  auto log_now = log();
  log_now.push_back(step);
  history_.push(Snapshot{std::move(next), std::move(log_now)});
  redo_log_.clear();
  ++version_;
}

void Session::undo() {
  StepDescriptor last = log().empty() ? StepDescriptor{} : log().back();
  history_.undo();
  redo_log_.push_back(std::move(last));
  ++version_;
}

void Session::redo() {
  history_.redo();
  redo_log_.pop_back();
  ++version_;
}

// ---------------------------------------------------------------------------
// XML writing

namespace {

std::string xml_escape(std::string_view s, bool attribute) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += attribute ? "&quot;" : "\""; break;
      case '\n': out += attribute ? "&#10;" : "\n"; break;
      case '\t': out += attribute ? "&#9;" : "\t"; break;
      default: out += c;
    }
  }
  return out;
}

void write_step(std::string& out, const StepDescriptor& step) {
  out += "    <step";
  for (const auto& [key, value] : step_to_attributes(step)) out += " " + key + "=\"" + xml_escape(value, true) + "\"";
  out += "/>\n";
}

}  // namespace

std::string save_session(const Session& s) {
  const Theorem& t = s.theorem();
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<proof-session version=\"1\" revision=\"" + std::to_string(s.version()) + "\">\n";
  out += "  <theorem>\n";
  for (const auto& g : s.state().theorem_givens) {
    out += "    <given label=\"" + xml_escape(g.label, true) + "\">" + xml_escape(render(g.formula), false) +
           "</given>\n";
  }
  out += "    <goal>" + xml_escape(render(t.goal), false) + "</goal>\n";
  out += "  </theorem>\n";
  if (s.log().empty()) {
    out += "  <steps/>\n";
  } else {
    out += "  <steps>\n";
    for (const auto& step : s.log()) write_step(out, step);
    out += "  </steps>\n";
  }
  auto redo = s.redo_log();
  if (!redo.empty()) {
    out += "  <redo>\n";
    for (const auto& step : redo) write_step(out, step);
    out += "  </redo>\n";
  }
  out += "</proof-session>\n";
  return out;
}

// ---------------------------------------------------------------------------
// XML reading

namespace {

struct Element {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::string text;
  std::vector<std::unique_ptr<Element>> children;
  std::size_t line = 0;

  const std::string* attribute(std::string_view key) const {
    for (const auto& [k, v] : attributes) {
      if (k == key) return &v;
    }
    return nullptr;
  }
};

struct ParseContext {
  std::unique_ptr<Element> root;
  std::vector<Element*> stack;
  XML_Parser parser;
};

void on_start(void* data, const XML_Char* name, const XML_Char** attrs) {
  auto* ctx = static_cast<ParseContext*>(data);
  auto el = std::make_unique<Element>();
  el->name = name;
  el->line = XML_GetCurrentLineNumber(ctx->parser);
  for (std::size_t i = 0; attrs[i]; i += 2) el->attributes.emplace_back(attrs[i], attrs[i + 1]);
  Element* raw = el.get();
  if (ctx->stack.empty()) {
    ctx->root = std::move(el);
  } else {
    ctx->stack.back()->children.push_back(std::move(el));
  }
  ctx->stack.push_back(raw);
}

void on_end(void* data, const XML_Char*) { static_cast<ParseContext*>(data)->stack.pop_back(); }

void on_text(void* data, const XML_Char* s, int len) {
  auto* ctx = static_cast<ParseContext*>(data);
  if (!ctx->stack.empty()) ctx->stack.back()->text.append(s, static_cast<std::size_t>(len));
}

std::unique_ptr<Element> parse_xml(std::string_view xml) {
  ParseContext ctx;
  std::unique_ptr<XML_ParserStruct, decltype(&XML_ParserFree)> parser(XML_ParserCreate("UTF-8"), XML_ParserFree);
  ctx.parser = parser.get();
  XML_SetUserData(parser.get(), &ctx);
  XML_SetElementHandler(parser.get(), on_start, on_end);
  XML_SetCharacterDataHandler(parser.get(), on_text);
  if (XML_Parse(parser.get(), xml.data(), static_cast<int>(xml.size()), 1) == XML_STATUS_ERROR) {
    auto line = XML_GetCurrentLineNumber(parser.get());
    throw Error(ErrorCode::MalformedXml,
                "line " + std::to_string(line) + ": " + XML_ErrorString(XML_GetErrorCode(parser.get())), line);
  }
  return std::move(ctx.root);
}

[[noreturn]] void schema(const Element& at, const std::string& msg) {
  throw Error(ErrorCode::SchemaViolation, "line " + std::to_string(at.line) + ": " + msg);
}

bool blank(std::string_view s) { return s.find_first_not_of(" \t\r\n") == std::string_view::npos; }

void expect_attributes(const Element& el, std::initializer_list<std::string_view> allowed) {
  for (const auto& [k, _] : el.attributes) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      schema(el, "unexpected attribute '" + k + "' on <" + el.name + ">");
    }
  }
}

void expect_structural(const Element& el) {
  if (!blank(el.text)) schema(el, "unexpected text inside <" + el.name + ">");
}

Formula formula_of(const Element& el) {
  if (!el.children.empty()) schema(el, "<" + el.name + "> holds a formula, not elements");
  try {
    return parse_formula(el.text);
  } catch (const Error& e) {
    schema(el, "bad formula in <" + el.name + ">: " + e.what());
  }
}

std::vector<StepDescriptor> steps_of(const Element& list) {
  expect_structural(list);
  expect_attributes(list, {});
  std::vector<StepDescriptor> out;
  for (const auto& child : list.children) {
    if (child->name != "step") schema(*child, "expected <step>, found <" + child->name + ">");
    if (!child->children.empty() || !blank(child->text)) schema(*child, "<step> must be empty");
    try {
      out.push_back(step_from_attributes(child->attributes));
    } catch (const Error& e) {
      schema(*child, "step " + std::to_string(out.size() + 1) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace

Session load_session(std::string_view xml) {
  auto root = parse_xml(xml);
  if (root->name != "proof-session") schema(*root, "root element must be <proof-session>");
  expect_attributes(*root, {"version", "revision"});
  expect_structural(*root);
  const std::string* version = root->attribute("version");
  if (!version) schema(*root, "missing version attribute");
  if (*version != "1") schema(*root, "unsupported session version '" + *version + "'");
  std::optional<std::uint64_t> revision;
  if (const std::string* r = root->attribute("revision")) {
    try {
      std::size_t used = 0;
      revision = std::stoull(*r, &used);
      if (used != r->size()) throw std::invalid_argument(*r);
    } catch (const std::exception&) {
      schema(*root, "revision must be a non-negative integer");
    }
  }

  const Element* theorem = nullptr;
  const Element* steps = nullptr;
  const Element* redo = nullptr;
  for (const auto& child : root->children) {
    const Element** slot = child->name == "theorem" ? &theorem
                           : child->name == "steps" ? &steps
                           : child->name == "redo"  ? &redo
                                                    : nullptr;
    if (!slot) schema(*child, "unexpected element <" + child->name + ">");
    if (*slot) schema(*child, "repeated <" + child->name + ">");
    if ((slot == &theorem && (steps || redo)) || (slot == &steps && redo)) {
      schema(*child, "<theorem>, <steps> and <redo> must appear in that order");
    }
    *slot = child.get();
  }
  if (!theorem) schema(*root, "missing <theorem>");
  if (!steps) schema(*root, "missing <steps>");

  Theorem t;
  bool have_goal = false;
  expect_structural(*theorem);
  expect_attributes(*theorem, {});
  for (const auto& child : theorem->children) {
    if (child->name == "given") {
      if (have_goal) schema(*child, "<given> must precede <goal>");
      expect_attributes(*child, {"label"});
      const std::string* label = child->attribute("label");
      if (!label) schema(*child, "<given> needs a label");
      t.labels.push_back(*label);
      t.givens.push_back(formula_of(*child));
    } else if (child->name == "goal") {
      if (have_goal) schema(*child, "repeated <goal>");
      expect_attributes(*child, {});
      t.goal = formula_of(*child);
      have_goal = true;
    } else {
      schema(*child, "unexpected element <" + child->name + "> in <theorem>");
    }
  }
  if (!have_goal) schema(*theorem, "missing <goal>");

  auto log = steps_of(*steps);
  auto redo_steps = redo ? steps_of(*redo) : std::vector<StepDescriptor>{};

  Session s(std::move(t));
  std::size_t index = 0;
  for (const auto* list : {&log, &redo_steps}) {
    for (const auto& step : *list) {
      ++index;
      try {
        s.apply(step);
      } catch (const Error& e) {
        throw Error(ErrorCode::ReplayFailure,
                    "step " + std::to_string(index) + " no longer applies: " + std::string(e.name()) + ": " + e.what(),
                    index);
      }
    }
  }
  for (std::size_t i = 0; i < redo_steps.size(); ++i) s.undo();
  s.version_ = revision.value_or(log.size());
  return s;
}

// ---------------------------------------------------------------------------

std::string export_html(const Session& s) {
  std::string out =
      "<!DOCTYPE html>\n"
      "<html lang=\"en\">\n"
      "<head>\n"
      "<meta charset=\"utf-8\">\n"
      "<title>Proof of " + html_escape(render(s.theorem().goal, Style::Unicode)) + "</title>\n"
      "<style>\n"
      "body { font-family: Georgia, serif; max-width: 48em; margin: 2em auto; line-height: 1.5; }\n"
      "ul.proof, .subproof > ul { list-style: none; padding-left: 1.5em; }\n"
      ".header { font-style: italic; }\n"
      ".placeholder { color: #a33; }\n"
      ".comment { color: #666; }\n"
      ".label { font-weight: bold; }\n"
      ".connective { color: #7a3e9d; }\n"
      ".quantifier { color: #1f5fa8; }\n"
      ".variable { color: #222; font-style: italic; }\n"
      ".set-op { color: #1b7f4c; }\n"
      ".relation { color: #b35a00; }\n"
      ".punct { color: #888; }\n"
      "</style>\n"
      "</head>\n"
      "<body>\n";
  out += s.outline(OutlineStyle::Html);
  out += "</body>\n</html>\n";
  return out;
}

}  // namespace setproof
