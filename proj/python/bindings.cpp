#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "satvis/derivation.hpp"
#include "satvis/errors.hpp"
#include "satvis/layout.hpp"
#include "satvis/log_parser.hpp"
#include "satvis/search.hpp"
#include "satvis/serialization.hpp"
#include "satvis/transformations.hpp"

namespace py = pybind11;
using namespace satvis;

namespace {

using DerivationPtr = std::shared_ptr<Derivation>;

DerivationPtr share(Derivation d) { return std::make_shared<Derivation>(std::move(d)); }

}  // namespace

PYBIND11_MODULE(_satvis, m) {
  m.doc() = "Parse, replay and lay out saturation attempts of a superposition prover";

  py::register_exception<NotFoundError>(m, "NotFoundError", PyExc_KeyError);
  py::register_exception<SchemaError>(m, "SchemaError", PyExc_ValueError);
  py::register_exception<VersionError>(m, "VersionError", PyExc_ValueError);
  py::register_exception<CycleError>(m, "CycleError", PyExc_RuntimeError);

  py::enum_<EventKind>(m, "EventKind")
      .value("New", EventKind::New)
      .value("Passive", EventKind::Passive)
      .value("Active", EventKind::Active);

  py::class_<SaturationEvent>(m, "SaturationEvent")
      .def_readonly("kind", &SaturationEvent::kind)
      .def_readonly("clause_id", &SaturationEvent::clause_id)
      .def_readonly("clause_text", &SaturationEvent::clause_text)
      .def_readonly("rule", &SaturationEvent::rule)
      .def_readonly("premises", &SaturationEvent::premises)
      .def_readonly("line_number", &SaturationEvent::line_number)
      .def("__eq__", [](const SaturationEvent& a, const SaturationEvent& b) { return a == b; })
      .def("__repr__", [](const SaturationEvent& e) { return "<SaturationEvent " + render_event(e) + ">"; });

  py::class_<ParseReport>(m, "ParseReport")
      .def_readonly("events", &ParseReport::events)
      .def_property_readonly("skipped_lines", [](const ParseReport& r) {
        std::vector<std::pair<std::size_t, std::string>> out;
        for (const auto& s : r.skipped_lines) out.emplace_back(s.line_number, s.reason);
        return out;
      });

  m.def("parse_line", &parse_line, py::arg("line"), py::arg("line_number") = 1);
  m.def("parse_log", &parse_log, py::arg("text"));
  m.def("render_event", &render_event, py::arg("event"));

  py::class_<Violation>(m, "Violation")
      .def_readonly("event_index", &Violation::event_index)
      .def_property_readonly("property", [](const Violation& v) { return std::string(to_string(v.property)); })
      .def_readonly("message", &Violation::message)
      .def("__repr__", [](const Violation& v) {
        return "<Violation " + std::string(to_string(v.property)) + " @" + std::to_string(v.event_index) + ">";
      });

  py::class_<ClauseNode>(m, "ClauseNode")
      .def_readonly("id", &ClauseNode::id)
      .def_readonly("clause_text", &ClauseNode::clause_text)
      .def_readonly("rule", &ClauseNode::rule)
      .def_readonly("premises", &ClauseNode::premises)
      .def_readonly("children", &ClauseNode::children)
      .def_readonly("new_at", &ClauseNode::new_at)
      .def_readonly("passive_at", &ClauseNode::passive_at)
      .def_readonly("active_at", &ClauseNode::active_at)
      .def_readonly("is_root", &ClauseNode::is_root)
      .def_property_readonly("origin", [](const ClauseNode& n) { return std::string(to_string(n.origin)); });

  py::class_<Derivation, DerivationPtr>(m, "Derivation")
      .def_property_readonly("event_count", &Derivation::event_count)
      .def_readonly("violations", &Derivation::violations)
      .def_readonly("warnings", &Derivation::warnings)
      .def("node_ids", [](const Derivation& d) {
        std::vector<ClauseId> ids;
        for (const auto& [id, node] : d.nodes) ids.push_back(id);
        return ids;
      })
      .def("node", &Derivation::node, py::arg("id"), py::return_value_policy::copy)
      .def("__len__", [](const Derivation& d) { return d.nodes.size(); })
      .def("__contains__", &Derivation::contains);

  py::class_<SaturationState>(m, "SaturationState")
      .def_readonly("active", &SaturationState::active)
      .def_readonly("passive", &SaturationState::passive)
      .def_readonly("event_index", &SaturationState::event_index);

  m.def("build", [](const std::vector<SaturationEvent>& events) { return share(build(events)); }, py::arg("events"));
  m.def("validate", [](const std::vector<SaturationEvent>& events) { return validate(events); }, py::arg("events"));
  m.def("state_at", &state_at, py::arg("derivation"), py::arg("event_index"));
  m.def(
      "find_refutation",
      [](const Derivation& d, const std::string& falsum) { return find_refutation(d, falsum); },
      py::arg("derivation"), py::arg("falsum") = std::string(kDefaultFalsum));
  m.def("sanitize", [](const Derivation& d) { return share(sanitize(d)); }, py::arg("derivation"));

  m.def("ancestors", &ancestors, py::arg("derivation"), py::arg("ids"));
  m.def("descendants", &descendants, py::arg("derivation"), py::arg("ids"));
  m.def("common_consequences", &common_consequences, py::arg("derivation"), py::arg("ids"));
  m.def("full_text_search", &full_text_search, py::arg("derivation"), py::arg("query"),
        py::arg("case_sensitive") = false);
  m.def("parents", &parents, py::arg("derivation"), py::arg("id"));
  m.def("children", &children, py::arg("derivation"), py::arg("id"));

  py::class_<GraphView>(m, "GraphView")
      .def_readonly("visible", &GraphView::visible)
      .def_readonly("highlighted", &GraphView::highlighted)
      .def_property_readonly("provenance",
                             [](const GraphView& v) {
                               std::vector<std::pair<std::string, std::vector<ClauseId>>> out;
                               for (const auto& s : v.provenance) out.emplace_back(s.op, s.ids);
                               return out;
                             })
      .def("edges", &GraphView::edges);

  m.def("full_view", [](const DerivationPtr& d) { return full_view(d); }, py::arg("derivation"));
  m.def("prune_to_activated", [](const DerivationPtr& d) { return prune_to_activated(std::shared_ptr<const Derivation>(d)); },
        py::arg("derivation"));
  m.def("merge_preprocessing", &merge_preprocessing, py::arg("view"));
  m.def("restrict_to_ancestors", &restrict_to_ancestors, py::arg("view"), py::arg("ids"));
  m.def("restrict_to_descendants", &restrict_to_descendants, py::arg("view"), py::arg("ids"));
  m.def("highlight", &highlight, py::arg("view"), py::arg("ids"));

  py::class_<Layout>(m, "Layout")
      .def_property_readonly("positions",
                             [](const Layout& l) {
                               std::map<ClauseId, std::pair<double, double>> out;
                               for (const auto& [id, p] : l.positions) out.emplace(id, std::make_pair(p.x, p.y));
                               return out;
                             })
      .def_readonly("rank", &Layout::rank)
      .def_readonly("width", &Layout::width)
      .def_readonly("height", &Layout::height);

  m.def(
      "layout",
      [](const GraphView& view, double horizontal_gap, double vertical_gap, int sweeps) {
        py::gil_scoped_release release;
        return layout(view, {horizontal_gap, vertical_gap, sweeps});
      },
      py::arg("view"), py::arg("horizontal_gap") = 180.0, py::arg("vertical_gap") = 120.0, py::arg("sweeps") = 4);

  m.def(
      "to_document",
      [](const Derivation& d, const GraphView& view, const Layout& l) { return to_document(d, view, l).dump(); },
      py::arg("derivation"), py::arg("view"), py::arg("layout"));
  m.def(
      "from_document",
      [](const std::string& text) {
        auto doc = from_document(nlohmann::json::parse(text));
        auto derivation = std::make_shared<Derivation>(*doc.derivation);
        doc.view.base = derivation;
        return py::make_tuple(derivation, doc.view, doc.layout);
      },
      py::arg("text"));
  m.def("to_dot", &to_dot, py::arg("view"));
}
