#pragma once

// JSON shapes shared by the HTTP API and the CLI. Both print through these
// functions so their output for the same input is byte-identical.

#include <string>

#include <json.hpp>

#include "svc/engine.hpp"
#include "svc/error.hpp"
#include "svc/selector.hpp"
#include "svc/serialize.hpp"
#include "svc/validate.hpp"
#include "svc/visualizers.hpp"

namespace svc::wire {

struct SearchRequest {
  SearchQuery query;
  bool enrich = false;
};

/// {"keywords", "filters", "ordering", "page", "enrich"}; all optional but keywords.
SearchRequest search_request_from_json(const json& j);

struct RenderRequest {
  SearchRequest search;
  std::string visualizer_id;
  json options = json::object();
};

/// {"search": {...}, "visualizer_id", "options"}
RenderRequest render_request_from_json(const json& j);

ResultSet run_search(const ServiceSpec& spec, const SearchRequest& request, Fetcher& fetcher,
                     const EngineOptions& options);
PresentationModel run_render(const ServiceSpec& spec, const RenderRequest& request, Fetcher& fetcher,
                             const EngineOptions& options,
                             const VisualizerRegistry& registry = VisualizerRegistry::global());

std::string search_output(const ResultSet& rs);
std::string render_output(const PresentationModel& model);

json report_json(const ValidationReport& report);
json suggestions_json(const std::vector<SelectorSuggestion>& suggestions);
json import_json(const ImportResult& result);
json error_json(const Error& e);

/// 400 for malformed input, 404 for unknown ids, 502 for upstream failures,
/// 422 for every other domain error.
int http_status(Errc code);

}  // namespace svc::wire
