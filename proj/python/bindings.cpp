// Thin Python surface over the engine. Structured values cross the boundary
// as canonical JSON text; the Python package turns them into dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "svc/engine.hpp"
#include "svc/error.hpp"
#include "svc/fixtures.hpp"
#include "svc/klm.hpp"
#include "svc/serialize.hpp"
#include "svc/validate.hpp"
#include "svc/wire.hpp"

namespace py = pybind11;
using namespace svc;

namespace {

fixtures::Mode mode_of(const std::string& name) {
  auto m = fixtures::mode_from(name);
  if (!m) throw Error(Errc::invalid_argument, "unknown fixture mode '" + name + "'");
  return *m;
}

std::string search_json(const std::string& spec_text, const std::string& request_text) {
  ServiceSpec spec = deserialize(spec_text);
  auto request = wire::search_request_from_json(parse_json(request_text));
  HttpFetcher fetcher;
  py::gil_scoped_release release;
  return wire::search_output(wire::run_search(spec, request, fetcher, {}));
}

std::string render_json(const std::string& spec_text, const std::string& request_text) {
  ServiceSpec spec = deserialize(spec_text);
  auto request = wire::render_request_from_json(parse_json(request_text));
  HttpFetcher fetcher;
  py::gil_scoped_release release;
  return wire::render_output(wire::run_render(spec, request, fetcher, {}));
}

std::string detect_json(const std::string& spec_text, const std::string& a, const std::string& b) {
  ServiceSpec spec = deserialize(spec_text);
  HttpFetcher fetcher;
  py::gil_scoped_release release;
  return dump_canonical(to_json(detect_strategy(spec, a, b, fetcher)));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "search service engine";

  static py::exception<Error> svc_error(m, "SvcError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = svc_error;
      py::object exc = err(std::string(e.name()) + ": " + e.what());
      exc.attr("code") = std::string(e.name());
      PyErr_SetObject(svc_error.ptr(), exc.ptr());
    }
  });

  m.attr("FORMAT_VERSION") = std::string(kFormatVersion);

  m.def("canonicalize", [](const std::string& text) { return serialize(deserialize(text)); },
        "Parse a spec document and print it canonically.");
  m.def("validate", [](const std::string& text) { return dump_canonical(wire::report_json(validate_spec(deserialize(text)))); });
  m.def("export_bundle", [](const std::vector<std::string>& specs) {
    std::vector<ServiceSpec> parsed;
    for (const auto& s : specs) parsed.push_back(deserialize(s));
    return export_bundle(parsed);
  });
  m.def("import_bundle", [](const std::string& text) { return dump_canonical(wire::import_json(import_bundle(text))); });

  m.def("search", &search_json, py::arg("spec"), py::arg("request"));
  m.def("render", &render_json, py::arg("spec"), py::arg("request"));
  m.def("detect_strategy", &detect_json, py::arg("spec"), py::arg("probe_a"), py::arg("probe_b"));

  m.def("klm_estimate", [](const std::string& scenario) {
    return dump_canonical(klm::to_json(klm::estimate(klm::scenario_from_json(parse_json(scenario)))));
  });
  m.def("klm_compare", [](const std::string& a, const std::string& b) {
    return dump_canonical(
        klm::to_json(klm::compare(klm::scenario_from_json(parse_json(a)), klm::scenario_from_json(parse_json(b)))));
  });

  m.def("fixture_spec", [](const std::string& mode, const std::string& base, bool with_strategy) {
    return serialize(fixtures::fixture_spec(mode_of(mode), base, with_strategy));
  }, py::arg("mode"), py::arg("base_url"), py::arg("with_strategy") = false);
  m.def("fixture_json_spec", [](const std::string& base) { return serialize(fixtures::fixture_json_spec(base)); });
  m.def("ground_truth_urls", [](const std::string& base, const std::string& keywords) {
    std::vector<std::string> out;
    for (const auto& b : fixtures::ground_truth(keywords)) out.push_back(fixtures::book_url(base, b.id));
    return out;
  });

  py::class_<fixtures::FixtureServer>(m, "FixtureServer")
      .def(py::init<>())
      .def("start", &fixtures::FixtureServer::start, py::arg("port") = 0)
      .def("stop", &fixtures::FixtureServer::stop, py::call_guard<py::gil_scoped_release>())
      .def_property_readonly("port", &fixtures::FixtureServer::port)
      .def_property_readonly("base_url", &fixtures::FixtureServer::base_url);
}
