#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "opetopes/error.hpp"
#include "opetopes/theory.hpp"

namespace py = pybind11;
using namespace opetopes;

namespace {

std::vector<std::string> issue_lines(const Report& r) {
  std::vector<std::string> out;
  for (const auto& i : r.issues) out.push_back(i.kind + " at " + i.at + ": " + i.detail);
  return out;
}

py::dict model_report(const ModelReport& r) {
  py::dict d;
  d["ok"] = r.ok();
  d["issues"] = r.issues;
  d["failed_equations"] = r.failed_equations;
  d["environments"] = r.environments;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.attr("__version__") = "0.1.0";
  // Messages start with the error kind, e.g. "NotComposable: ...".
  py::register_exception<Error>(m, "OpetopeError");

  py::class_<Opetope>(m, "Opetope")
      .def_static("point", &Opetope::point)
      .def_static("arrow", &Opetope::arrow)
      .def_static("integer", &Opetope::integer, py::arg("m"))
      .def_static("corolla", &Opetope::corolla)
      .def_static("degenerate", &Opetope::degenerate)
      .def_static("parse", [](const std::string& s) { return parse_opetope(s); })
      .def_property_readonly("dim", &Opetope::dim)
      .def_property_readonly("size", &Opetope::size)
      .def_property_readonly("node_count", &Opetope::node_count)
      .def_property_readonly("is_degenerate", &Opetope::is_degenerate)
      .def("node_addresses",
           [](const Opetope& w) {
             std::vector<std::string> out;
             for (const auto& a : w.node_addresses()) out.push_back(a.str());
             return out;
           })
      .def("target", [](const Opetope& w) { return target(w); })
      .def("source", [](const Opetope& w, const std::string& addr) { return source(w, Address::parse(addr)); })
      .def("validate", [](const Opetope& w) { return issue_lines(validate(w)); })
      .def("check_identities", [](const Opetope& w) { return issue_lines(check_identities(w)); })
      .def("__str__", &Opetope::str)
      .def("__repr__", [](const Opetope& w) { return "Opetope.parse('" + w.str() + "')"; })
      .def("__eq__", [](const Opetope& a, const Opetope& b) { return a == b; })
      .def("__lt__", [](const Opetope& a, const Opetope& b) { return a < b; })
      .def("__hash__", &Opetope::hash);

  m.def("enumerate_opetopes", &enumerate_opetopes, py::arg("dim"), py::arg("max_nodes"));
  m.def("graft_corolla", [](const Opetope& nu, const std::string& l, const Opetope& psi) {
    return graft_corolla(nu, Address::parse(l), psi);
  });
  m.def("substitute", [](const Opetope& T, const std::string& p, const Opetope& U) {
    return substitute(T, Address::parse(p), U);
  });
  m.def("hom", [](const Opetope& psi, const Opetope& w) {
    std::vector<std::string> out;
    for (const auto& f : hom(psi, w)) out.push_back(word_str(f.word));
    return out;
  }, "Normal words of the morphisms psi -> w.");

  py::class_<FinOpSet>(m, "OpSet")
      .def_static("parse", &FinOpSet::parse)
      .def("dump", &FinOpSet::dump)
      .def("__len__", &FinOpSet::size)
      .def("ok", [](const FinOpSet& X) { return X.check().ok(); });
  m.def("representable", [](const Opetope& w) { return representable(w); });
  m.def("spine", [](const Opetope& w) { return spine(w).sub; });
  m.def("boundary", [](const Opetope& w) { return boundary(w).sub; });

  m.def("h_ordinal", &h_ordinal);
  m.def("monotone_maps", [](int a, int b) {
    std::vector<std::vector<int>> out;
    for (const auto& f : monotone_maps(a, b)) out.push_back(f.image);
    return out;
  });
  m.def("free_path_count", [](const std::string& graph, std::size_t max_nodes) {
    return free_cells(Graph::parse(graph).family(), Opetope::arrow(), max_nodes).size();
  }, "Number of free category cells (paths) of length <= max_nodes over a graph in text form.");
  m.def("nerve", [](const std::string& category, std::size_t max_size) {
    return nerve_category(FiniteCategory::parse(category), max_size);
  });
  m.def("nerve_ok", [](const FinOpSet& N) { return nerve_axioms_check(N).ok(); });

  m.def("parse_theory", [](const std::string& text) { return theory_str(parse_theory(text)); },
        "Parses and elaborates a theory; returns its normalised text.");
  m.def("check_model", [](const std::string& theory, const std::string& model) {
    return model_report(check_model(parse_theory(theory), Model::parse(model)));
  });
  m.def("signature_roundtrip_isomorphic", [](const std::string& category) {
    FiniteCategory C = FiniteCategory::parse(category);
    return category_isomorphism(C, signature_to_lfd(lfd_to_signature(C))).has_value();
  });
}
