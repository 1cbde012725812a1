#include "svc/wire.hpp"

namespace svc::wire {

SearchRequest search_request_from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::parse_error, "search: expected an object");
  json query = j;
  SearchRequest r;
  if (auto it = j.find("enrich"); it != j.end()) {
    if (!it->is_boolean()) throw Error(Errc::parse_error, "search.enrich: expected a boolean");
    r.enrich = it->get<bool>();
    query.erase("enrich");
  }
  if (!query.contains("keywords")) throw Error(Errc::parse_error, "search.keywords: missing field");
  r.query = query_from_json(query, "search");
  return r;
}

RenderRequest render_request_from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::parse_error, "render: expected an object");
  RenderRequest r;
  if (!j.contains("search")) throw Error(Errc::parse_error, "render.search: missing field");
  r.search = search_request_from_json(j["search"]);
  if (auto it = j.find("visualizer_id"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw Error(Errc::parse_error, "render.visualizer_id: expected a string");
    r.visualizer_id = it->get<std::string>();
  }
  if (auto it = j.find("options"); it != j.end() && !it->is_null()) r.options = *it;
  return r;
}

ResultSet run_search(const ServiceSpec& spec, const SearchRequest& request, Fetcher& fetcher,
                     const EngineOptions& options) {
  EngineOptions opts = options;
  opts.enrich = request.enrich;
  return execute(spec, request.query, fetcher, opts).results;
}

PresentationModel run_render(const ServiceSpec& spec, const RenderRequest& request, Fetcher& fetcher,
                             const EngineOptions& options, const VisualizerRegistry& registry) {
  ResultSet rs = run_search(spec, request.search, fetcher, options);
  RenderContext ctx;
  for (const auto& p : spec.result_spec.properties) ctx.property_names.push_back(p.name);
  return registry.render(rs, request.visualizer_id, request.options, ctx);
}

std::string search_output(const ResultSet& rs) { return dump_canonical(to_json(rs)); }

std::string render_output(const PresentationModel& model) { return dump_canonical(to_json(model)); }

json report_json(const ValidationReport& report) {
  json problems = json::array();
  for (const auto& p : report.problems)
    problems.push_back({{"severity", p.severity == Severity::error ? "error" : "warning"},
                        {"path", p.path},
                        {"message", p.message}});
  return {{"ok", report.ok()}, {"problems", problems}};
}

json suggestions_json(const std::vector<SelectorSuggestion>& suggestions) {
  json out = json::array();
  for (const auto& s : suggestions)
    out.push_back({{"selector", to_json(s.selector)},
                   {"match_count", s.match_count},
                   {"specificity", to_string(s.specificity)},
                   {"rank", s.rank}});
  return {{"suggestions", out}};
}

json import_json(const ImportResult& result) {
  json imported = json::array();
  for (const auto& s : result.imported) imported.push_back(s.id);
  json rejected = json::array();
  for (const auto& r : result.rejected)
    rejected.push_back({{"index", r.index}, {"id", r.id}, {"reasons", r.reasons}});
  json renamed = json::array();
  for (const auto& [from, to] : result.renamed) renamed.push_back({{"from", from}, {"to", to}});
  return {{"imported", imported}, {"rejected", rejected}, {"renamed", renamed}};
}

json error_json(const Error& e) { return {{"error", e.name()}, {"message", e.what()}}; }

int http_status(Errc code) {
  switch (code) {
    case Errc::parse_error:
    case Errc::version_mismatch:
    case Errc::validation:
    case Errc::invalid_argument:
    case Errc::invalid_option:
    case Errc::selector_parse:
      return 400;
    case Errc::not_found:
      return 404;
    case Errc::fetch_failed:
      return 502;
    default:
      return 422;
  }
}

}  // namespace svc::wire
