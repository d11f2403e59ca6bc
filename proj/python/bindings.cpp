// _circlet: Python bindings for sessions, one-shot proofs, scripts and the
// HTTP-shaped service.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "circlet/print.hpp"
#include "circlet/script.hpp"
#include "circlet/service.hpp"

namespace py = pybind11;
using namespace circlet;

namespace {

py::object to_py(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

json from_py(const py::object& o) {
  return json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

py::dict report_dict(const TacticReport& r) {
  py::dict d;
  d["calculus"] = r.calculus;
  d["outcome"] = std::string(outcome_name(r.outcome));
  d["message"] = r.message;
  d["failed"] = r.failed ? py::object(py::str(to_string(*r.failed))) : py::object(py::none());
  std::vector<std::string> proved;
  for (const auto& e : r.proved) proved.push_back(to_string(e));
  d["proved"] = proved;
  d["steps"] = r.steps;
  return d;
}

py::dict prove(const std::string& spec_text, const std::vector<std::string>& goals, const std::string& calculus,
               const std::string& mode, std::size_t max_derive) {
  Specification spec = parse_spec({spec_text, "<python>"});
  std::vector<Equation> eqs;
  for (const auto& g : goals) eqs.push_back(parse_goal(g, spec));
  Limits lim;
  lim.max_derive = max_derive;
  ProofResult r;
  if (calculus == "coinduction") {
    r = prove_coinduction(spec, eqs, lim);
  } else if (calculus == "induction") {
    auto m = parse_mode(mode);
    if (!m) throw py::value_error("unknown induction mode " + mode);
    r = prove_induction(spec, eqs, *m, lim);
  } else {
    throw py::value_error("calculus must be induction or coinduction");
  }
  py::dict d;
  d["outcome"] = std::string(outcome_name(r.outcome));
  d["message"] = r.message;
  std::vector<std::string> rules, hyps;
  for (const auto& s : r.trace) rules.push_back(s.rule);
  for (const auto& h : r.hypotheses) hyps.push_back(to_string(h.eq));
  d["rules"] = rules;
  d["hypotheses"] = hyps;
  d["derives"] = r.derives;
  d["reduces"] = r.reduces;
  d["failed"] = r.failed ? py::object(py::str(to_string(*r.failed))) : py::object(py::none());
  return d;
}

}  // namespace

PYBIND11_MODULE(_circlet, m) {
  m.doc() = "Circular induction and coinduction prover";

  static py::exception<ParseError> parse_exc(m, "ParseError", PyExc_ValueError);
  static py::exception<SessionError> session_exc(m, "SessionError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ParseError& e) {
      py::set_error(parse_exc, e.what());
    } catch (const SessionError& e) {
      py::set_error(session_exc, e.what());
    } catch (const TermError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def("check_spec", [](const std::string& text) { return print_spec(parse_spec({text, "<python>"})); },
        py::arg("text"), "Parses a specification and returns its canonical text.");
  m.def("prove", &prove, py::arg("spec"), py::arg("goals"), py::arg("calculus") = "induction",
        py::arg("mode") = "subsort", py::arg("max_derive") = 50);
  m.def(
      "run_script",
      [](const std::string& spec, const std::string& script, bool plain) {
        Session s(spec, "<python>");
        auto r = run_batch(s, script, plain, {std::nullopt});
        return py::make_tuple(r.exit_code, r.transcript);
      },
      py::arg("spec"), py::arg("script"), py::arg("plain") = false);

  py::class_<Session>(m, "Session")
      .def(py::init<const std::string&, const std::string&>(), py::arg("spec"), py::arg("origin") = "<python>")
      .def("add_goal", [](Session& s, const std::string& t) { return to_string(s.add_goal(t)); })
      .def(
          "run",
          [](Session& s, const std::string& tactic, const std::string& mode) {
            auto t = Tactic::parse(tactic, mode);
            if (!t) throw py::value_error("unknown tactic " + tactic);
            return report_dict(s.run_tactic(*t));
          },
          py::arg("tactic") = "auto", py::arg("mode") = "")
      .def(
          "start",
          [](Session& s, const std::string& tactic, const std::string& mode) {
            auto t = Tactic::parse(tactic, mode);
            if (!t) throw py::value_error("unknown tactic " + tactic);
            s.start(*t);
          },
          py::arg("tactic") = "auto", py::arg("mode") = "")
      .def("step", [](Session& s) { return to_py(step_json(s.step())); })
      .def_property_readonly("proving", &Session::proving)
      .def_property_readonly("status", [](const Session& s) { return std::string(status_name(s.status())); })
      .def(
          "generalize",
          [](Session& s, const std::string& sub, const std::string& var) { return to_string(s.generalize(sub, var)); },
          py::arg("subterm"), py::arg("var"))
      .def("save", &Session::save_state, py::arg("name") = "")
      .def("load", &Session::load_state, py::arg("name") = "")
      .def("set", &Session::set)
      .def("pending", [](const Session& s) {
        std::vector<std::string> out;
        for (const auto& e : s.pending()) out.push_back(to_string(e));
        return out;
      })
      .def("proved", [](const Session& s) {
        std::vector<std::string> out;
        for (const auto& p : s.proved()) out.push_back(to_string(p.eq));
        return out;
      })
      .def(
          "trace",
          [](const Session& s, const std::string& fmt) {
            auto f = parse_trace_format(fmt);
            if (!f) throw py::value_error("unknown trace format " + fmt);
            return render(s.trace(), *f);
          },
          py::arg("format") = "table")
      .def("describe", [](const Session& s) { return to_py(s.describe()); })
      .def("export", [](const Session& s) { return to_py(s.export_json()); })
      .def_static("from_export", [](const py::object& o) { return Session::import_json(from_py(o)); });

  py::class_<Service>(m, "Service")
      .def(py::init<std::size_t>(), py::arg("step_cap") = 5000)
      .def(
          "handle",
          [](Service& svc, const std::string& method, const std::string& path, const py::object& body,
             const std::map<std::string, std::string>& query) {
            std::string text = body.is_none() ? std::string() : from_py(body).dump();
            Response r;
            {
              py::gil_scoped_release release;
              r = svc.handle(method, path, query, text);
            }
            return py::make_tuple(r.status, to_py(r.body));
          },
          py::arg("method"), py::arg("path"), py::arg("body") = py::none(),
          py::arg("query") = std::map<std::string, std::string>{});
}
