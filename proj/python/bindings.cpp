#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "setproof/auto.hpp"
#include "setproof/error.hpp"
#include "setproof/model.hpp"
#include "setproof/reexpress.hpp"
#include "setproof/script.hpp"
#include "setproof/session.hpp"

namespace py = pybind11;
using namespace setproof;

namespace {

OutlineStyle outline_style(const std::string& name) {
  if (name == "text") return OutlineStyle::Text;
  if (name == "unicode") return OutlineStyle::Unicode;
  if (name == "html") return OutlineStyle::Html;
  throw py::value_error("style must be 'text', 'unicode' or 'html'");
}

Style formula_style(const std::string& name) {
  if (name == "ascii" || name == "text") return Style::Ascii;
  if (name == "unicode") return Style::Unicode;
  if (name == "html") return Style::Html;
  throw py::value_error("style must be 'ascii', 'unicode' or 'html'");
}

py::dict given_dict(const Given& g) {
  py::dict d;
  d["label"] = g.label;
  d["formula"] = render(g.formula);
  d["origin"] = std::string(given_origin_name(g.origin));
  return d;
}

py::list goals_list(const ProofState& s) {
  py::list out;
  for (const auto& g : open_goals(s)) {
    py::dict d;
    d["id"] = g.id.str();
    d["goal"] = render(g.goal);
    py::list givens;
    for (const auto& h : g.givens) givens.append(given_dict(h));
    d["givens"] = givens;
    d["comments"] = g.comments;
    out.append(d);
  }
  return out;
}

std::vector<std::string> step_lines(const std::vector<StepDescriptor>& steps) {
  std::vector<std::string> out;
  for (const auto& s : steps) out.push_back(format_step_line(s));
  return out;
}

Session make_session(const std::vector<std::string>& givens, const std::string& goal,
                     const std::vector<std::string>& labels) {
  Theorem t;
  for (const auto& g : givens) t.givens.push_back(parse_formula(g));
  t.labels = labels;
  t.goal = parse_formula(goal);
  return Session(std::move(t));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Structured proofs in elementary set theory";

  static py::exception<Error> error(m, "SetproofError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object pos = e.position() ? py::object(py::int_(*e.position())) : py::object(py::none());
      py::tuple args = py::make_tuple(std::string(e.name()), std::string(e.what()), pos);
      PyErr_SetObject(error.ptr(), args.ptr());
    }
  });

  m.def("normalize", [](const std::string& text, const std::string& style) { return render(parse_formula(text), formula_style(style)); },
        py::arg("formula"), py::arg("style") = "ascii", "Parse a formula and render it back.");
  m.def("free_vars", [](const std::string& text) {
    auto vars = free_vars(parse_formula(text));
    return std::vector<std::string>(vars.begin(), vars.end());
  });
  m.def("alpha_eq", [](const std::string& a, const std::string& b) { return alpha_eq(parse_formula(a), parse_formula(b)); });
  m.def("valid_in_rank", [](const std::string& f, std::size_t rank) { return valid_in_rank(parse_formula(f), rank); },
        py::arg("formula"), py::arg("rank") = 3);
  m.def("equivalent_in_rank",
        [](const std::string& f, const std::string& g, std::size_t rank) {
          return equivalent_in_rank(parse_formula(f), parse_formula(g), rank);
        },
        py::arg("f"), py::arg("g"), py::arg("rank") = 3);
  m.def("rules", [] {
    py::list out;
    for (const auto& r : equivalence_rules()) {
      py::dict d;
      d["id"] = r.id;
      d["name"] = r.name;
      d["lhs"] = r.lhs;
      d["rhs"] = r.rhs;
      out.append(d);
    }
    return out;
  });
  m.def("reexpress",
        [](const std::string& f, const std::string& path, const std::string& rule, const std::string& dir) {
          return render(apply_equivalence(parse_formula(f), path_from_string(path), rule, parse_direction(dir)));
        },
        py::arg("formula"), py::arg("path"), py::arg("rule"), py::arg("dir") = "forward");
  m.def("check_script",
        [](const std::string& text, const std::string& style) {
          auto script = parse_script(text);
          Session s(Theorem{script.givens, script.labels, script.goal});
          for (const auto& step : script.steps) s.apply(step);
          return py::make_tuple(is_complete(s.state()), s.outline(outline_style(style)));
        },
        py::arg("text"), py::arg("style") = "text", "Replay a proof script; returns (complete, outline).");

  py::class_<Session>(m, "Session")
      .def(py::init(&make_session), py::arg("givens"), py::arg("goal"), py::arg("labels") = std::vector<std::string>{})
      .def_static("load", [](const std::string& xml) { return load_session(xml); })
      .def("save", [](const Session& s) { return save_session(s); })
      .def("export_html", [](const Session& s) { return export_html(s); })
      .def_property_readonly("version", &Session::version)
      .def_property_readonly("complete", [](const Session& s) { return is_complete(s.state()); })
      .def_property_readonly("can_undo", &Session::can_undo)
      .def_property_readonly("can_redo", &Session::can_redo)
      .def("log", [](const Session& s) { return step_lines(s.log()); })
      .def("open_goals", [](const Session& s) { return goals_list(s.state()); })
      .def("apply", [](Session& s, const std::string& line) { s.apply(parse_step_line(line)); }, py::arg("step"),
           "Apply a step written as `kind key=value ...`.")
      .def("undo", &Session::undo)
      .def("redo", &Session::redo)
      .def("applicable_steps",
           [](const Session& s, const std::string& goal, std::optional<std::string> given) {
             py::list out;
             for (const auto& t : applicable_steps(s.state(), GoalId::parse(goal), given)) {
               py::dict d;
               d["kind"] = std::string(step_kind_name(t.step.kind));
               d["step"] = format_step_line(t.step);
               d["needs"] = t.needs;
               out.append(d);
             }
             return out;
           },
           py::arg("goal") = "0", py::arg("given") = py::none())
      .def("auto",
           [](Session& s, const std::string& goal, bool run, std::size_t max_steps) {
             GoalId id = GoalId::parse(goal);
             std::vector<StepDescriptor> steps;
             if (run) {
               steps = auto_run(s.state(), id, max_steps).applied;
             } else if (auto step = auto_choose(s.state(), id)) {
               steps.push_back(*step);
             }
             for (const auto& step : steps) s.apply(step);
             return step_lines(steps);
           },
           py::arg("goal") = "0", py::arg("run") = false, py::arg("max_steps") = 50)
      .def("outline", [](const Session& s, const std::string& style) { return s.outline(outline_style(style)); },
           py::arg("style") = "text");
}
