// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <sys/wait.h>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "random_states.hpp"
#include "rule_instances.hpp"
#include "setproof/auto.hpp"
#include "setproof/error.hpp"
#include "setproof/model.hpp"
#include "setproof/reexpress.hpp"
#include "setproof/script.hpp"
#include "setproof/service.hpp"
#include "setproof/session.hpp"
#include "soundness.hpp"
#include "support.hpp"

using namespace setproof;
using namespace setproof::testing;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  bool ok;
  std::string detail;
};

int failures = 0;

void criterion(const std::string& name, const std::function<Verdict()>& body) {
  Verdict v{false, ""};
  try {
    v = body();
  } catch (const Error& e) {
    v = {false, "unexpected " + std::string(e.name()) + ": " + e.what()};
  } catch (const std::exception& e) {
    v = {false, std::string("unexpected exception: ") + e.what()};
  }
  if (!v.ok) ++failures;
  std::cout << (v.ok ? "PASS " : "FAIL ") << name << ": " << v.detail << std::endl;
}

std::string fmt(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f s", s);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool node_alpha_eq(const ProofNode& a, const ProofNode& b) {
  if (a.kind != b.kind || !alpha_eq(a.goal, b.goal) || a.comments != b.comments || a.step != b.step ||
      a.fresh != b.fresh || a.givens.size() != b.givens.size() || a.children.size() != b.children.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.givens.size(); ++i) {
    if (a.givens[i].label != b.givens[i].label || !alpha_eq(a.givens[i].formula, b.givens[i].formula)) return false;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!node_alpha_eq(*a.children[i], *b.children[i])) return false;
  }
  return true;
}

const char* kTheorems[] = {"intersection_in_union.proof", "subset_transitive.proof", "intersection_subset.proof",
                           "power_set_monotone.proof", "set_de_morgan.proof"};

Session replay_script(const fs::path& file) {
  auto script = parse_script(slurp(file));
  Session s(Theorem{script.givens, script.labels, script.goal});
  for (const auto& step : script.steps) s.apply(step);
  return s;
}

int run_cli(const std::string& args) {
  std::string cmd = std::string("'") + SETPROOF_CLI + "' " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// ---------------------------------------------------------------------------

Verdict parser_round_trip() {
  auto t0 = Clock::now();
  FormulaGen gen(2024);
  int bad = 0;
  for (int i = 0; i < 500; ++i) {
    Formula f = gen.formula(6);
    if (!alpha_eq(parse_formula(render(f, Style::Ascii)), f)) ++bad;
  }
  double t = seconds_since(t0);
  return {bad == 0 && t < 5.0, "500 formulas, " + std::to_string(bad) + " failures, " + fmt(t) + " (limit 5 s)"};
}

Verdict rule_soundness() {
  auto t0 = Clock::now();
  std::size_t instances = 0, counterexamples = 0;
  for (const auto& rule : equivalence_rules()) {
    for_each_rule_instance(rule, [&](const Formula& lhs, const Formula& rhs) {
      ++instances;
      if (!equivalent_in_rank(lhs, rhs, 3)) ++counterexamples;
    });
  }
  double t = seconds_since(t0);
  return {counterexamples == 0 && t < 30.0 && instances > 0,
          std::to_string(equivalence_rules().size()) + " rules, " + std::to_string(instances) + " instances, " +
              std::to_string(counterexamples) + " counterexamples, " + fmt(t) + " (limit 30 s)"};
}

Verdict step_soundness() {
  std::set<StepKind> kinds;
  int bad = 0;
  for (const auto& inst : step_instances()) {
    auto step = parse_step_line(inst.step);
    auto s = apply_step(instance_state(inst), step);
    kinds.insert(step.kind);
    if (!check_local_soundness(node_at(s, GoalId::parse(inst.target))).empty()) ++bad;
  }
  bool all_kinds = kinds.size() == all_step_kinds().size();
  return {bad == 0 && all_kinds, std::to_string(step_instances().size()) + " instances covering " +
                                     std::to_string(kinds.size()) + "/" + std::to_string(all_step_kinds().size()) +
                                     " kinds, " + std::to_string(bad) + " failures"};
}

Verdict end_to_end() {
  std::string detail;
  bool ok = true;
  for (const char* name : kTheorems) {
    fs::path file = fs::path(SETPROOF_SCRIPTS) / name;
    auto t0 = Clock::now();
    int code = run_cli("check '" + file.string() + "'");
    double t = seconds_since(t0);
    Session s = replay_script(file);
    Formula claim = s.theorem().goal;
    for (auto it = s.theorem().givens.rbegin(); it != s.theorem().givens.rend(); ++it) {
      claim = Formula::implies(*it, claim);
    }
    bool valid = valid_in_rank(claim, 3);
    bool complete = is_complete(s.state());
    bool good = code == 0 && complete && valid && t < 1.0;
    if (std::string(name) == "intersection_in_union.proof") good = good && s.log().size() == 7;
    ok = ok && good;
    detail += std::string(detail.empty() ? "" : "; ") + name + " " + (good ? "ok" : "BAD") + " (" +
              std::to_string(s.log().size()) + " steps, exit " + std::to_string(code) + ", " + fmt(t) + ")";
  }
  return {ok, detail};
}

Verdict auto_behavior() {
  auto run = auto_run(new_proof({}, parse_formula("forall x (x in A inter B -> x in A)")), GoalId());
  bool two = run.applied.size() == 2 && run.applied[0].kind == StepKind::LetArbitrary &&
             run.applied[1].kind == StepKind::Suppose && open_goals(run.state).size() == 1 &&
             !auto_choose(run.state, open_goals(run.state)[0].id);

  FormulaGen gen(314);
  int fired = 0, stray = 0;
  for (int i = 0; i < 200; ++i) {
    auto s = random_state(gen, 6);
    for (const auto& g : open_goals(s)) {
      auto step = auto_choose(s, g.id);
      if (!step) continue;
      ++fired;
      bool offered = false;
      for (const auto& t : applicable_steps(s, g.id)) offered = offered || (t.needs.empty() && t.step == *step);
      if (!offered) ++stray;
    }
  }
  return {two && stray == 0, std::string("auto_run applied ") + std::to_string(run.applied.size()) +
                                 " steps then stopped; 200 random states, " + std::to_string(fired) +
                                 " auto choices, " + std::to_string(stray) + " not offered"};
}

Verdict undo_redo() {
  FormulaGen gen(77);
  Session s(Theorem{{parse_formula("A sub B"), parse_formula("B sub C")}, {}, parse_formula("A sub C & C sub A | ~A = C")});
  Session initial = s;
  for (int i = 0; i < 100; ++i) {
    auto goals = open_goals(s.state());
    const auto& g = goals[static_cast<std::size_t>(gen.pick(static_cast<int>(goals.size())))];
    s.apply(random_step(gen, s.state(), g, true));
  }
  auto final_root = s.state().root;
  auto final_text = s.outline(OutlineStyle::Text);
  for (int i = 0; i < 100; ++i) s.undo();
  bool back = s.state().root == initial.state().root && s.outline(OutlineStyle::Text) == initial.outline(OutlineStyle::Text) &&
              !s.can_undo();
  for (int i = 0; i < 100; ++i) s.redo();
  bool forward = s.state().root == final_root && s.outline(OutlineStyle::Text) == final_text && !s.can_redo();

  ReexpressSession r(parse_formula("A sub B & ~(x in A union B)"));
  std::vector<Formula> trail{r.current()};
  int applied = 0;
  while (applied < 50) {
    auto paths = formula_paths(r.current());
    const Path& p = paths[static_cast<std::size_t>(gen.pick(static_cast<int>(paths.size())))];
    auto options = applicable_equivalences(r.current(), p);
    if (options.empty()) continue;
    const auto& o = options[static_cast<std::size_t>(gen.pick(static_cast<int>(options.size())))];
    r.apply(p, o.rule->id, o.direction);
    trail.push_back(r.current());
    ++applied;
  }
  bool dialog = true;
  for (int i = 50; i > 0; --i) {
    r.undo();
    dialog = dialog && r.current() == trail[static_cast<std::size_t>(i - 1)];
  }
  dialog = dialog && r.current() == r.origin() && !r.can_undo();
  for (int i = 1; i <= 50; ++i) {
    r.redo();
    dialog = dialog && r.current() == trail[static_cast<std::size_t>(i)];
  }
  dialog = dialog && !r.can_redo() && r.applied().size() == 50;
  return {back && forward && dialog, std::string("session 100 steps: undo ") + (back ? "restores" : "DIFFERS") +
                                         ", redo " + (forward ? "restores" : "DIFFERS") + "; re-express 50 rules: " +
                                         (dialog ? "both ways exact" : "MISMATCH")};
}

Verdict persistence() {
  int sessions = 0, bad = 0;
  auto check = [&](const Session& s) {
    ++sessions;
    auto xml = save_session(s);
    Session loaded = load_session(xml);
    if (save_session(loaded) != xml || !node_alpha_eq(*loaded.state().root, *s.state().root) ||
        loaded.version() != s.version()) {
      ++bad;
    }
  };
  for (const char* name : kTheorems) {
    Session s = replay_script(fs::path(SETPROOF_SCRIPTS) / name);
    check(s);
    s.undo();
    s.undo();
    check(s);  // with a redo section
  }
  Session corrupt = replay_script(fs::path(SETPROOF_SCRIPTS) / "intersection_subset.proof");
  auto xml = save_session(corrupt);
  xml.replace(xml.find("kind=\"and-elim\""), 15, "kind=\"and-elimx\"");
  bool named = false;
  try {
    load_session(xml);
  } catch (const Error& e) {
    named = e.code() == ErrorCode::SchemaViolation && std::string(e.what()).find("and-elimx") != std::string::npos;
  }
  return {bad == 0 && named, std::to_string(sessions) + " sessions round-tripped, " + std::to_string(bad) +
                                 " mismatches; corrupted kind " + (named ? "named in SchemaViolation" : "NOT reported")};
}

json call(Service& svc, const std::string& method, const std::string& path, const json& body, int& status,
          std::map<std::string, std::string> query = {}) {
  auto out = svc.handle(HttpRequest{method, path, std::move(query), body.is_null() ? "" : body.dump()});
  status = out.status;
  if (out.content_type != "application/json") return json{{"raw", out.body}};
  return json::parse(out.body);
}

Verdict service_flow() {
  fs::path dir = fs::temp_directory_path() / ("setproof_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  std::vector<std::uint64_t> versions;
  int st = 0;
  std::string id;
  json before_restart;
  bool flow = true, conflict = false, restored = false;
  {
    Service svc(dir);
    auto created = call(svc, "POST", "/api/v1/sessions", {{"givens", {"A sub B"}}, {"goal", "A sub B"}}, st);
    flow = flow && st == 201;
    id = created["id"];
    std::string base = "/api/v1/sessions/" + id;
    versions.push_back(created["view"]["version"]);
    auto applied = call(svc, "POST", base + "/steps",
                        {{"expected_version", 0}, {"goal", "0"}, {"step", {{"kind", "conclude"}, {"given", "H1"}}}}, st);
    flow = flow && st == 200;
    versions.push_back(applied["view"]["version"]);
    auto undone = call(svc, "POST", base + "/undo", {{"expected_version", 1}}, st);
    flow = flow && st == 200;
    versions.push_back(undone["view"]["version"]);
    auto xml = call(svc, "GET", base + "/export", nullptr, st, {{"format", "xml"}});
    flow = flow && st == 200 && xml["raw"].get<std::string>().find("<proof-session") != std::string::npos;
    flow = flow && versions == std::vector<std::uint64_t>{0, 1, 2};

    // Two clients race from the same version; the loser re-reads and retries.
    auto other = call(svc, "POST", "/api/v1/sessions", {{"goal", "x in A -> x in A"}}, st);
    std::string obase = "/api/v1/sessions/" + other["id"].get<std::string>();
    std::atomic<int> ok = 0, conflicts = 0;
    auto client = [&](const std::string& text) {
      int code = 0;
      call(svc, "POST", obase + "/steps",
           {{"expected_version", 0}, {"goal", "0"}, {"step", {{"kind", "comment"}, {"text", text}}}}, code);
      if (code == 200) ++ok;
      if (code == 409) {
        ++conflicts;
        auto fresh = call(svc, "GET", obase, nullptr, code);
        call(svc, "POST", obase + "/steps",
             {{"expected_version", fresh["view"]["version"]}, {"goal", "0"}, {"step", {{"kind", "comment"}, {"text", text}}}},
             code);
      }
    };
    std::thread a(client, "first client"), b(client, "second client");
    a.join();
    b.join();
    auto after = call(svc, "GET", obase, nullptr, st);
    conflict = ok == 1 && conflicts == 1 && after["view"]["version"] == 2 &&
               after["view"]["open_goals"][0]["comments"].size() == 2;

    before_restart = json::object();
    for (const auto& sid : svc.store().ids()) before_restart[sid] = call(svc, "GET", "/api/v1/sessions/" + sid, nullptr, st);
  }
  {
    Service restarted(dir);
    json after = json::object();
    for (const auto& sid : restarted.store().ids()) {
      after[sid] = call(restarted, "GET", "/api/v1/sessions/" + sid, nullptr, st);
    }
    restored = after == before_restart && before_restart.size() == 2;
  }
  fs::remove_all(dir);
  std::string vs;
  for (auto v : versions) vs += (vs.empty() ? "" : ",") + std::to_string(v);
  return {flow && conflict && restored, "versions " + vs + "; interleaved clients " +
                                            (conflict ? "one 409, no lost update" : "WRONG") + "; restart " +
                                            (restored ? "restores all sessions" : "LOSES STATE")};
}

}  // namespace

int main() {
  criterion("parser-round-trip", parser_round_trip);
  criterion("equivalence-rule-soundness", rule_soundness);
  criterion("step-local-soundness", step_soundness);
  criterion("end-to-end-theorems", end_to_end);
  criterion("auto-behavior", auto_behavior);
  criterion("unlimited-undo-redo", undo_redo);
  criterion("persistence", persistence);
  criterion("service", service_flow);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
