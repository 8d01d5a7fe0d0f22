#include "setproof/service.hpp"

#include <httplib.h>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "setproof/auto.hpp"
#include "setproof/error.hpp"

namespace setproof {

using nlohmann::json;

// ---------------------------------------------------------------------------
// SessionStore

SessionStore::SessionStore(std::optional<std::filesystem::path> state_dir) : dir_(std::move(state_dir)) {
  if (!dir_) return;
  namespace fs = std::filesystem;
  fs::create_directories(*dir_);
  for (const auto& entry : fs::directory_iterator(*dir_)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".xml") continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    try {
      auto id = entry.path().stem().string();
      sessions_.emplace(id, std::make_shared<Entry>(load_session(buf.str())));
    } catch (const Error& e) {
      std::cerr << "skipping " << entry.path() << ": " << e.name() << ": " << e.what() << "\n";
    }
  }
}

std::string SessionStore::new_id() {
  std::lock_guard lock(rng_mutex_);
  static std::random_device rd;
  static const char* hex = "0123456789abcdef";
  std::string id;
  for (int i = 0; i < 4; ++i) {
    std::uint32_t word = rd();
    for (int k = 0; k < 8; ++k) {
      id += hex[word & 0xf];
      word >>= 4;
    }
  }
  return id;
}

std::string SessionStore::add(Session session) {
  auto entry = std::make_shared<Entry>(std::move(session));
  std::string id;
  {
    std::unique_lock lock(mutex_);
    do {
      id = new_id();
    } while (sessions_.contains(id));
    sessions_.emplace(id, entry);
  }
  std::lock_guard lock(entry->mutex);
  persist(id, entry->session);
  return id;
}

std::vector<std::string> SessionStore::ids() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, _] : sessions_) out.push_back(id);
  return out;
}

bool SessionStore::contains(const std::string& id) const { return find(id) != nullptr; }

std::shared_ptr<SessionStore::Entry> SessionStore::find(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

void SessionStore::persist(const std::string& id, const Session& s) const {
  if (!dir_) return;
  auto target = *dir_ / (id + ".xml");
  auto tmp = *dir_ / (id + ".xml.tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << save_session(s);
    out.flush();
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

// ---------------------------------------------------------------------------
// Routing

namespace {

struct HttpError {
  int status;
  std::string error;
  std::string message;
  std::optional<std::size_t> position;
  json extra = json::object();
};

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownGoal:
    case ErrorCode::UnknownGiven: return 404;
    default: return 422;
  }
}

HttpError from_error(const Error& e) {
  return HttpError{status_for(e.code()), std::string(e.name()), e.what(), e.position()};
}

HttpError bad_request(const std::string& message) { return HttpError{400, "BadRequest", message, std::nullopt}; }

HttpResponse json_response(int status, const json& body) {
  return HttpResponse{status, "application/json", body.dump()};
}

HttpResponse error_response(const HttpError& e) {
  json body = e.extra;
  body["error"] = e.error;
  body["message"] = e.message;
  if (e.position) body["position"] = *e.position;
  return json_response(e.status, body);
}

json parse_body(const std::string& body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded()) throw HttpError{400, "MalformedJson", "request body is not valid JSON", std::nullopt};
  if (!j.is_object()) throw bad_request("request body must be a JSON object");
  return j;
}

std::string string_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw bad_request(std::string("missing field '") + key + "'");
  if (!it->is_string()) throw bad_request(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

std::optional<std::string> optional_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw bad_request(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

void check_version(const json& body, const Session& s) {
  auto it = body.find("expected_version");
  if (it == body.end() || it->is_null()) return;
  if (!it->is_number_unsigned() && !it->is_number_integer()) throw bad_request("expected_version must be an integer");
  if (it->get<std::int64_t>() != static_cast<std::int64_t>(s.version())) {
    HttpError e{409, "VersionConflict",
                "expected version " + it->dump() + " but the session is at " + std::to_string(s.version()),
                std::nullopt};
    e.extra["version"] = s.version();
    throw e;
  }
}

json given_json(const Given& g) {
  return {{"label", g.label},
          {"formula", render(g.formula, Style::Ascii)},
          {"formula_unicode", render(g.formula, Style::Unicode)},
          {"formula_html", render(g.formula, Style::Html)},
          {"origin", given_origin_name(g.origin)}};
}

json view_json(const Session& s) {
  json goals = json::array();
  for (const auto& g : open_goals(s.state())) {
    json givens = json::array();
    for (const auto& h : g.givens) givens.push_back(given_json(h));
    goals.push_back({{"id", g.id.str()},
                     {"goal", render(g.goal, Style::Ascii)},
                     {"goal_unicode", render(g.goal, Style::Unicode)},
                     {"goal_html", render(g.goal, Style::Html)},
                     {"givens", givens},
                     {"comments", g.comments}});
  }
  return {{"version", s.version()},
          {"complete", is_complete(s.state())},
          {"outline_html", s.outline(OutlineStyle::Html)},
          {"open_goals", goals},
          {"can_undo", s.can_undo()},
          {"can_redo", s.can_redo()}};
}

json step_json(const StepDescriptor& step) {
  json j = json::object();
  for (const auto& [k, v] : step_to_attributes(step)) j[k] = v;
  return j;
}

// Field by field rather than through step_from_attributes so each bad value
// keeps its own error code (an unknown goal is a 404, a bad term a ParseError).
StepDescriptor step_from_json(const json& body) {
  auto it = body.find("step");
  if (it == body.end() || !it->is_object()) throw bad_request("missing object field 'step'");
  const json& j = *it;
  StepDescriptor s;
  auto kind_name = string_field(j, "kind");
  auto kind = step_kind_from_name(kind_name);
  if (!kind) throw HttpError{422, "InvalidArgument", "unknown step kind '" + kind_name + "'", std::nullopt};
  s.kind = *kind;
  auto goal = optional_string(body, "goal");
  if (!goal) goal = optional_string(j, "goal");
  if (!goal) throw bad_request("missing field 'goal'");
  s.target = GoalId::parse(*goal);
  for (const auto& [key, value] : j.items()) {
    if (key == "kind" || key == "goal" || value.is_null()) continue;
    if (!value.is_string()) throw bad_request("step field '" + key + "' must be a string");
    auto v = value.get<std::string>();
    if (key == "given") {
      s.given = v;
    } else if (key == "given2") {
      s.given2 = v;
    } else if (key == "term") {
      s.term = parse_term(v);
    } else if (key == "witness") {
      s.witness = v;
    } else if (key == "label") {
      s.label = v;
    } else if (key == "path") {
      s.path = path_from_string(v);
    } else if (key == "rule") {
      s.rule = v;
    } else if (key == "dir") {
      s.direction = parse_direction(v);
    } else if (key == "text") {
      s.text = v;
    } else {
      throw HttpError{422, "InvalidArgument", "unknown step field '" + key + "'", std::nullopt};
    }
  }
  return s;
}

const Given& find_given(const std::vector<Given>& givens, const std::string& label) {
  for (const auto& g : givens) {
    if (g.label == label) return g;
  }
  throw Error(ErrorCode::UnknownGiven, "no given labeled '" + label + "'");
}

std::string query(const HttpRequest& r, const char* key, bool required = true) {
  auto it = r.query.find(key);
  if (it == r.query.end()) {
    if (required) throw bad_request(std::string("missing query parameter '") + key + "'");
    return "";
  }
  return it->second;
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : path) {
    if (c == '/') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

HttpError not_found(const std::string& what) { return HttpError{404, "NotFound", what, std::nullopt}; }

class Router {
 public:
  Router(SessionStore& store, const HttpRequest& r) : store_(store), r_(r) {}

  HttpResponse run() {
    auto parts = split_path(r_.path);
    if (parts.size() < 3 || parts[0] != "api" || parts[1] != "v1") throw not_found("no route for " + r_.path);
    parts.erase(parts.begin(), parts.begin() + 2);
    const std::string& m = r_.method;

    if (parts.size() == 1 && parts[0] == "rules") return method("GET", [&] { return rules(); });
    if (parts.size() == 1 && parts[0] == "parse") return method("POST", [&] { return parse(); });
    if (parts[0] != "sessions") throw not_found("no route for " + r_.path);
    if (parts.size() == 1) {
      if (m == "POST") return create();
      return method("GET", [&] { return json_response(200, {{"sessions", store_.ids()}}); });
    }
    if (parts.size() == 2 && parts[1] == "import") return method("POST", [&] { return import(); });
    const std::string& id = parts[1];
    if (parts.size() == 2) {
      return method("GET", [&] { return read(id, [&](const Session& s) { return json_response(200, {{"id", id}, {"view", view_json(s)}}); }); });
    }
    if (parts.size() != 3) throw not_found("no route for " + r_.path);
    const std::string& action = parts[2];
    if (action == "steps" && m == "GET") return read(id, [&](const Session& s) { return templates(s); });
    if (action == "steps") return method("POST", [&] { return mutate(id, [&](Session& s, const json& b) { return apply(s, b); }); });
    if (action == "undo") {
      return method("POST", [&] { return mutate(id, [](Session& s, const json&) { s.undo(); return json::array(); }); });
    }
    if (action == "redo") {
      return method("POST", [&] { return mutate(id, [](Session& s, const json&) { s.redo(); return json::array(); }); });
    }
    if (action == "auto") return method("POST", [&] { return mutate(id, [&](Session& s, const json& b) { return automate(s, b); }); });
    if (action == "equivalences") return method("GET", [&] { return read(id, [&](const Session& s) { return equivalences(s); }); });
    if (action == "export") return method("GET", [&] { return read(id, [&](const Session& s) { return export_doc(s); }); });
    throw not_found("no route for " + r_.path);
  }

 private:
  template <typename Fn>
  HttpResponse method(const char* expected, Fn&& fn) {
    if (r_.method != expected) {
      throw HttpError{405, "MethodNotAllowed", r_.method + " is not allowed on " + r_.path, std::nullopt};
    }
    return fn();
  }

  template <typename Fn>
  HttpResponse read(const std::string& id, Fn&& fn) {
    std::optional<HttpResponse> out;
    if (!store_.with(id, false, [&](Session& s) { out = fn(static_cast<const Session&>(s)); })) {
      throw HttpError{404, "UnknownSession", "no session '" + id + "'", std::nullopt};
    }
    return *out;
  }

  // `op` returns the applied steps; the session is persisted only when it
  // returns normally.
  template <typename Fn>
  HttpResponse mutate(const std::string& id, Fn&& op) {
    json body = parse_body(r_.body.empty() ? "{}" : r_.body);
    json out;
    if (!store_.with(id, true, [&](Session& s) {
          check_version(body, s);
          json applied = op(s, body);
          out = {{"view", view_json(s)}, {"applied", applied}};
        })) {
      throw HttpError{404, "UnknownSession", "no session '" + id + "'", std::nullopt};
    }
    return json_response(200, out);
  }

  HttpResponse create() {
    json body = parse_body(r_.body);
    Theorem t;
    if (auto it = body.find("givens"); it != body.end() && !it->is_null()) {
      if (!it->is_array()) throw bad_request("givens must be an array of strings");
      for (const auto& g : *it) {
        if (!g.is_string()) throw bad_request("givens must be an array of strings");
        t.givens.push_back(parse_formula(g.get<std::string>()));
      }
    }
    if (auto it = body.find("labels"); it != body.end() && !it->is_null()) {
      if (!it->is_array()) throw bad_request("labels must be an array of strings");
      for (const auto& l : *it) {
        if (!l.is_string()) throw bad_request("labels must be an array of strings");
        t.labels.push_back(l.get<std::string>());
      }
    }
    t.goal = parse_formula(string_field(body, "goal"));
    Session s(std::move(t));
    json view = view_json(s);
    auto id = store_.add(std::move(s));
    return json_response(201, {{"id", id}, {"view", view}});
  }

  HttpResponse import() {
    Session s = load_session(r_.body);
    json view = view_json(s);
    auto id = store_.add(std::move(s));
    return json_response(201, {{"id", id}, {"view", view}});
  }

  HttpResponse templates(const Session& s) {
    auto goal = GoalId::parse(query(r_, "goal"));
    std::optional<std::string> given;
    if (auto g = query(r_, "given", false); !g.empty()) given = g;
    json list = json::array();
    for (const auto& t : applicable_steps(s.state(), goal, given)) {
      json entry = step_json(t.step);
      entry.erase("goal");
      entry["needs"] = t.needs;
      entry["inference"] = is_inference(t.step.kind);
      list.push_back(entry);
    }
    return json_response(200, {{"goal", goal.str()}, {"templates", list}});
  }

  json apply(Session& s, const json& body) {
    auto step = step_from_json(body);
    s.apply(step);
    return json::array({step_json(step)});
  }

  json automate(Session& s, const json& body) {
    auto goal = GoalId::parse(optional_string(body, "goal").value_or("0"));
    bool run = false;
    if (auto it = body.find("run"); it != body.end() && !it->is_null()) {
      if (!it->is_boolean()) throw bad_request("run must be a boolean");
      run = it->get<bool>();
    }
    std::size_t max_steps = 50;
    if (auto it = body.find("max_steps"); it != body.end() && !it->is_null()) {
      if (!it->is_number_integer() || it->get<std::int64_t>() < 0) throw bad_request("max_steps must be a non-negative integer");
      max_steps = it->get<std::size_t>();
    }
    std::vector<StepDescriptor> steps;
    if (run) {
      steps = auto_run(s.state(), goal, max_steps).applied;
    } else if (auto step = auto_choose(s.state(), goal)) {
      steps.push_back(*step);
    }
    // Each chosen step goes through the session so undo sees it individually.
    json applied = json::array();
    for (const auto& step : steps) {
      s.apply(step);
      applied.push_back(step_json(step));
    }
    return applied;
  }

  HttpResponse equivalences(const Session& s) {
    auto goal = GoalId::parse(query(r_, "goal"));
    const ProofNode& node = node_at(s.state(), goal);
    if (node.kind != ProofNode::Kind::Open) throw Error(ErrorCode::UnknownGoal, "goal " + goal.str() + " is not open");
    auto given = query(r_, "given", false);
    Formula f = given.empty() ? node.goal : find_given(node.givens, given).formula;
    auto path = path_from_string(query(r_, "path", false));
    VarSet avoid = free_vars(node.goal);
    for (const auto& g : node.givens) avoid.merge(free_vars(g.formula));
    json options = json::array();
    for (const auto& o : applicable_equivalences(f, path, avoid)) {
      options.push_back({{"rule", o.rule->id},
                         {"name", o.rule->name},
                         {"dir", direction_name(o.direction)},
                         {"preview", render(o.preview, Style::Ascii)},
                         {"preview_unicode", render(o.preview, Style::Unicode)}});
    }
    return json_response(200, {{"formula", render(f, Style::Ascii)},
                               {"formula_html", render(f, Style::Html)},
                               {"path", path_to_string(path)},
                               {"options", options}});
  }

  HttpResponse export_doc(const Session& s) {
    auto format = query(r_, "format", false);
    if (format.empty() || format == "xml") return HttpResponse{200, "application/xml", save_session(s)};
    if (format == "html") return HttpResponse{200, "text/html; charset=utf-8", export_html(s)};
    throw HttpError{422, "InvalidArgument", "unknown export format '" + format + "'", std::nullopt};
  }

  HttpResponse parse() {
    json body = parse_body(r_.body);
    auto text = string_field(body, "formula");
    Formula f = parse_formula(text);
    return json_response(200, {{"ascii", render(f, Style::Ascii)},
                               {"unicode", render(f, Style::Unicode)},
                               {"html", render(f, Style::Html)}});
  }

  HttpResponse rules() {
    json list = json::array();
    for (const auto& r : equivalence_rules()) {
      list.push_back({{"id", r.id},
                      {"name", r.name},
                      {"kind", r.kind == RuleKind::Definitional ? "definitional" : "logical"},
                      {"lhs", r.lhs},
                      {"rhs", r.rhs}});
    }
    return json_response(200, {{"rules", list}});
  }

  SessionStore& store_;
  const HttpRequest& r_;
};

}  // namespace

HttpResponse Service::handle(const HttpRequest& request) {
  try {
    return Router(store_, request).run();
  } catch (const HttpError& e) {
    return error_response(e);
  } catch (const Error& e) {
    return error_response(from_error(e));
  } catch (const std::exception& e) {
    return error_response(HttpError{500, "InternalError", e.what(), std::nullopt});
  }
}

// ---------------------------------------------------------------------------
// HTTP adapter

struct HttpServer::Impl {
  Service& service;
  httplib::Server server;
  explicit Impl(Service& s) : service(s) {}
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    HttpRequest r{req.method, req.path, {}, req.body};
    for (const auto& [k, v] : req.params) r.query.emplace(k, v);
    auto out = impl_->service.handle(r);
    res.status = out.status;
    res.set_content(out.body, out.content_type);
  };
  auto& s = impl_->server;
  s.Get(".*", handler);
  s.Post(".*", handler);
  s.Put(".*", handler);
  s.Delete(".*", handler);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

}  // namespace setproof
