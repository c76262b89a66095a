#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nct/io.hpp"
#include "nct/lyndon.hpp"
#include "nct/parallel.hpp"
#include "nct/pipeline.hpp"

namespace py = pybind11;

namespace {

nct::Word to_word(const std::vector<int>& letters) { return nct::Word(letters); }

py::dict to_dict(const nct::LinearWords& x) {
  py::dict out;
  for (const auto& [w, c] : x) out[py::tuple(py::cast(w.letters()))] = nct::to_string(c);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Noncommutative thickenings of polynomial charts";

  py::class_<nct::RunResult>(m, "RunResult")
      .def_readonly("exit_code", &nct::RunResult::exit_code)
      .def_readonly("artifact", &nct::RunResult::artifact)
      .def_readonly("report", &nct::RunResult::report)
      .def_readonly("message", &nct::RunResult::message);

  m.def(
      "run",
      [](const std::string& command, const std::string& spec, const std::vector<std::string>& args,
         std::optional<int> truncation, std::optional<std::string> target, int n, int max_degree) {
        nct::RunOptions o;
        o.command = command;
        o.spec_text = spec;
        o.args = args;
        o.truncation = truncation;
        o.target_text = std::move(target);
        o.dims_n = n;
        o.dims_max = max_degree;
        py::gil_scoped_release release;
        return nct::run(o);
      },
      py::arg("command"), py::arg("spec") = "{}", py::arg("args") = std::vector<std::string>{},
      py::arg("truncation") = py::none(), py::arg("target") = py::none(), py::arg("n") = 2, py::arg("max_degree") = 5,
      "Runs one CLI command on a chart spec given as JSON text.");

  m.def("commands", &nct::commands);
  m.def("set_threads", &nct::set_thread_count, py::arg("threads"));
  m.def("threads", &nct::thread_count);

  m.def(
      "lyndon_words",
      [](int n, int max_length) {
        std::vector<std::vector<int>> out;
        for (const auto& l : nct::enumerate_lyndon(n, max_length)) out.push_back(l.word.letters());
        return out;
      },
      py::arg("n"), py::arg("max_length"));
  m.def(
      "bracketing", [](const std::vector<int>& lyndon) { return to_dict(nct::bracketing(to_word(lyndon))); },
      py::arg("lyndon"), "Expansion of the standard bracketing as {word: coefficient}.");
  m.def(
      "bracket_string", [](const std::vector<int>& lyndon) { return nct::io::bracket_string(to_word(lyndon)); },
      py::arg("lyndon"));
  m.def(
      "normalize_poly", [](const std::string& text, int n) { return nct::Poly::parse(text, n).str(); }, py::arg("text"),
      py::arg("n"));
  m.def(
      "quotient_dimensions",
      [](int n, const std::vector<std::map<std::vector<int>, std::string>>& relations, int d) {
        std::vector<nct::TensorPoly> rels;
        for (const auto& r : relations) {
          nct::TensorPoly t(n, d);
          for (const auto& [w, c] : r) t.add_term(to_word(w), nct::Poly(n, nct::parse_rational(c)));
          rels.push_back(std::move(t));
        }
        return nct::quotient_dimensions(n, rels, d);
      },
      py::arg("n"), py::arg("relations"), py::arg("d"));

  py::register_exception<nct::ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<nct::DimensionError>(m, "DimensionError", PyExc_ValueError);
}
