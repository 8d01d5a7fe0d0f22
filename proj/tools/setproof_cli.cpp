// setproof: build and check proofs from the command line.
//
// Exit codes: 0 ok (or complete, for check), 1 incomplete (check only),
// 2 usage, parse or file errors, 3 step-application errors.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "setproof/auto.hpp"
#include "setproof/error.hpp"
#include "setproof/script.hpp"
#include "setproof/service.hpp"
#include "setproof/session.hpp"

using namespace setproof;

namespace {

constexpr int kOk = 0;
constexpr int kIncomplete = 1;
constexpr int kUsage = 2;
constexpr int kStepError = 3;

// Carries an exit code out of a subcommand.
struct Exit {
  int code;
};

[[noreturn]] void fail(int code, const std::string& message) {
  std::cerr << "setproof: " << message << "\n";
  throw Exit{code};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(kUsage, "cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out.flush()) fail(kUsage, "cannot write " + path);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) fail(kUsage, "cannot write " + path);
}

std::string describe(const Error& e) { return std::string(e.name()) + ": " + e.what(); }

Session load(const std::string& path) {
  try {
    return load_session(read_file(path));
  } catch (const Error& e) {
    fail(e.code() == ErrorCode::ReplayFailure ? kStepError : kUsage, path + ": " + describe(e));
  }
}

Formula formula_arg(const std::string& text, const char* what) {
  try {
    return parse_formula(text);
  } catch (const Error& e) {
    fail(kUsage, std::string(what) + " '" + text + "': " + describe(e));
  }
}

OutlineStyle style_of(const std::string& format) {
  if (format == "text") return OutlineStyle::Text;
  if (format == "unicode") return OutlineStyle::Unicode;
  return OutlineStyle::Html;
}

// Runs one session operation, reporting kernel errors against the step index
// the operation would have had.
template <typename Fn>
void session_op(Session& s, const std::string& what, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    fail(kStepError, "step " + std::to_string(s.log().size() + 1) + " (" + what + "): " + describe(e));
  }
}

void print_outline(const Session& s) { std::cout << s.outline(OutlineStyle::Text); }

int run_new(const std::string& file, const std::vector<std::string>& givens, const std::vector<std::string>& labels,
            const std::string& goal) {
  Theorem t;
  for (const auto& g : givens) t.givens.push_back(formula_arg(g, "given"));
  t.labels = labels;
  t.goal = formula_arg(goal, "goal");
  try {
    Session s(std::move(t));
    write_file(file, save_session(s));
    print_outline(s);
  } catch (const Error& e) {
    fail(kUsage, describe(e));
  }
  return kOk;
}

int run_apply(const std::string& file, const std::string& kind, const std::vector<std::string>& args) {
  Session s = load(file);
  std::vector<std::pair<std::string, std::string>> attributes{{"kind", kind}};
  bool has_goal = false;
  for (const auto& a : args) {
    auto eq = a.find('=');
    if (eq == std::string::npos || eq == 0) fail(kUsage, "expected key=value, got '" + a + "'");
    attributes.emplace_back(a.substr(0, eq), a.substr(eq + 1));
    has_goal = has_goal || attributes.back().first == "goal";
  }
  // Without goal=, the step targets the first open goal.
  if (!has_goal) {
    auto goals = open_goals(s.state());
    if (goals.empty()) fail(kStepError, "the proof is complete");
    attributes.insert(attributes.begin() + 1, {"goal", goals[0].id.str()});
  }
  StepDescriptor step;
  try {
    step = step_from_attributes(attributes);
  } catch (const Error& e) {
    fail(kUsage, describe(e));
  }
  session_op(s, kind, [&] { s.apply(step); });
  write_file(file, save_session(s));
  print_outline(s);
  return kOk;
}

int run_auto(const std::string& file, const std::string& goal_text, bool run, std::size_t max_steps) {
  Session s = load(file);
  GoalId goal;
  std::vector<StepDescriptor> steps;
  session_op(s, "auto", [&] {
    goal = GoalId::parse(goal_text);
    if (run) {
      steps = auto_run(s.state(), goal, max_steps).applied;
    } else if (auto step = auto_choose(s.state(), goal)) {
      steps.push_back(*step);
    }
  });
  if (steps.empty()) std::cerr << "setproof: auto: no step applies at goal " << goal.str() << "\n";
  for (const auto& step : steps) {
    session_op(s, std::string(step_kind_name(step.kind)), [&] { s.apply(step); });
    std::cerr << "applied: " << format_step_line(step) << "\n";
  }
  if (!steps.empty()) write_file(file, save_session(s));
  print_outline(s);
  return kOk;
}

int run_history(const std::string& file, bool undo) {
  Session s = load(file);
  try {
    undo ? s.undo() : s.redo();
  } catch (const Error& e) {
    fail(kStepError, describe(e));
  }
  write_file(file, save_session(s));
  print_outline(s);
  return kOk;
}

int run_render(const std::string& file, const std::string& format) {
  Session s = load(file);
  std::cout << (format == "html" ? export_html(s) : s.outline(style_of(format)));
  return kOk;
}

int run_goals(const std::string& file) {
  Session s = load(file);
  for (const auto& g : open_goals(s.state())) {
    std::cout << "goal " << g.id.str() << ": " << render(g.goal) << "\n";
    for (const auto& h : g.givens) std::cout << "  " << h.label << ": " << render(h.formula) << "\n";
  }
  return kOk;
}

int run_check(const std::string& file, const std::string& format) {
  std::string text = read_file(file);
  ProofScript script;
  try {
    script = parse_script(text);
  } catch (const Error& e) {
    fail(kUsage, file + ": " + describe(e));
  }
  Theorem t{script.givens, script.labels, script.goal};
  std::optional<Session> s;
  try {
    s.emplace(std::move(t));
  } catch (const Error& e) {
    fail(kUsage, file + ": " + describe(e));
  }
  for (std::size_t i = 0; i < script.steps.size(); ++i) {
    try {
      s->apply(script.steps[i]);
    } catch (const Error& e) {
      fail(kStepError, file + ":" + std::to_string(script.step_lines[i]) + ": step " + std::to_string(i + 1) + " (" +
                           std::string(step_kind_name(script.steps[i].kind)) + "): " + describe(e));
    }
  }
  std::cout << s->outline(style_of(format));
  bool done = is_complete(s->state());
  if (!done) std::cerr << "setproof: " << open_goals(s->state()).size() << " goal(s) remain open\n";
  return done ? kOk : kIncomplete;
}

const char* env(const char* name) {
  const char* v = std::getenv(name);
  return v && *v ? v : nullptr;
}

int run_serve(std::optional<int> port_flag, std::optional<std::string> dir_flag, std::string host) {
  int port = 8080;
  if (const char* p = env("SETPROOF_PORT")) {
    try {
      port = std::stoi(p);
    } catch (const std::exception&) {
      fail(kUsage, std::string("bad SETPROOF_PORT '") + p + "'");
    }
  }
  if (port_flag) port = *port_flag;
  std::optional<std::filesystem::path> dir;
  if (const char* d = env("SETPROOF_STATE_DIR")) dir = d;
  if (dir_flag) dir = *dir_flag;
  if (const char* h = env("SETPROOF_HOST")) host = h;

  Service service(dir);
  HttpServer server(service);
  int bound = server.bind(host, port);
  if (bound < 0) fail(kUsage, "cannot listen on " + host + ":" + std::to_string(port));
  std::cerr << "setproof: serving on http://" << host << ":" << bound << "/api/v1";
  if (dir) std::cerr << " (state in " << dir->string() << ")";
  std::cerr << std::endl;
  server.listen();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structured proofs in elementary set theory"};
  app.require_subcommand(1);
  int code = kOk;
  const std::vector<std::string> formats{"text", "unicode", "html"};

  std::string file, goal, kind, format = "text", host = "127.0.0.1";
  std::vector<std::string> givens, labels, args;
  bool run = false;
  std::size_t max_steps = 50;
  std::optional<int> port;
  std::optional<std::string> state_dir;

  auto* cmd_new = app.add_subcommand("new", "Create a session file for a theorem");
  cmd_new->add_option("file", file, "Session file to write")->required();
  cmd_new->add_option("-g,--given", givens, "A hypothesis (repeatable)");
  cmd_new->add_option("-l,--label", labels, "Label for the corresponding --given (repeatable)");
  cmd_new->add_option("--goal", goal, "The statement to prove")->required();

  auto* cmd_apply = app.add_subcommand("apply", "Apply one step and rewrite the session file");
  cmd_apply->add_option("file", file, "Session file")->required();
  cmd_apply->add_option("kind", kind, "Step kind, e.g. forall-elim")->required();
  cmd_apply->add_option("args", args, "Step arguments as key=value; goal defaults to the first open goal");

  auto* cmd_auto = app.add_subcommand("auto", "Let the goal's form choose the next step");
  cmd_auto->add_option("file", file, "Session file")->required();
  std::string auto_goal = "0";
  cmd_auto->add_option("--goal", auto_goal, "Goal to work on")->capture_default_str();
  cmd_auto->add_flag("--run", run, "Repeat until stuck or closed");
  cmd_auto->add_option("--max-steps", max_steps, "Step limit for --run")->capture_default_str();

  auto* cmd_undo = app.add_subcommand("undo", "Undo the last step");
  cmd_undo->add_option("file", file, "Session file")->required();
  auto* cmd_redo = app.add_subcommand("redo", "Redo the last undone step");
  cmd_redo->add_option("file", file, "Session file")->required();

  auto* cmd_render = app.add_subcommand("render", "Print the proof outline");
  cmd_render->add_option("file", file, "Session file")->required();
  cmd_render->add_option("-f,--format", format, "text, unicode or html")->check(CLI::IsMember(formats))->capture_default_str();

  auto* cmd_goals = app.add_subcommand("goals", "List open goals with their givens");
  cmd_goals->add_option("file", file, "Session file")->required();

  auto* cmd_check = app.add_subcommand("check", "Replay a proof script; exit 0 only if the proof is complete");
  cmd_check->add_option("script", file, "Proof script")->required();
  cmd_check->add_option("-f,--format", format, "text, unicode or html")->check(CLI::IsMember(formats))->capture_default_str();

  auto* cmd_serve = app.add_subcommand("serve", "Run the HTTP/JSON service");
  cmd_serve->add_option("--port", port, "Port (env SETPROOF_PORT, default 8080; 0 picks one)");
  cmd_serve->add_option("--state-dir", state_dir, "Persist sessions here (env SETPROOF_STATE_DIR)");
  cmd_serve->add_option("--host", host, "Address to bind (env SETPROOF_HOST)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (cmd_new->parsed()) code = run_new(file, givens, labels, goal);
    if (cmd_apply->parsed()) code = run_apply(file, kind, args);
    if (cmd_auto->parsed()) code = run_auto(file, auto_goal, run, max_steps);
    if (cmd_undo->parsed()) code = run_history(file, true);
    if (cmd_redo->parsed()) code = run_history(file, false);
    if (cmd_render->parsed()) code = run_render(file, format);
    if (cmd_goals->parsed()) code = run_goals(file);
    if (cmd_check->parsed()) code = run_check(file, format);
    if (cmd_serve->parsed()) code = run_serve(port, state_dir, host);
  } catch (const Exit& e) {
    code = e.code;
  }
  return code;
}
