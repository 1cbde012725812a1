#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "svc/fetcher.hpp"
#include "svc/html.hpp"
#include "svc/model.hpp"

namespace svc {

struct PropertyValue {
  enum class Kind { missing, text, url };
  Kind kind = Kind::missing;
  std::string value;

  static PropertyValue missing() { return {}; }
  static PropertyValue text(std::string v) { return {Kind::text, std::move(v)}; }
  static PropertyValue url(std::string v) { return {Kind::url, std::move(v)}; }

  bool is_missing() const { return kind == Kind::missing; }
  bool operator==(const PropertyValue&) const = default;
};

struct Provenance {
  std::string source_url;
  std::size_t container_index = 0;
  std::string fetched_at;
  bool operator==(const Provenance&) const = default;
};

struct DomainObject {
  std::string type_name;
  std::map<std::string, PropertyValue> values;  // one entry per spec property
  std::string target_url;
  Provenance provenance;

  const PropertyValue& value(const std::string& property) const;
  bool operator==(const DomainObject&) const = default;
};

struct PageSummary {
  int page = 1;
  bool has_next = false;
  bool has_prev = false;
  bool operator==(const PageSummary&) const = default;
};

struct ResultSet {
  std::string service_id;
  SearchQuery query;
  std::vector<DomainObject> items;
  PageSummary page;
  std::size_t dropped = 0;
  std::vector<std::string> diagnostics;
};

struct ExtractionOutput {
  std::vector<DomainObject> objects;
  std::size_t dropped = 0;  // containers without a target_url
  std::vector<std::string> diagnostics;
};

/// One object per container match in document order. Containers without a
/// resolvable target_url are dropped and counted.
ExtractionOutput extract_results(const html::Document& doc, const SearchResultSpec& spec,
                                 std::string_view base_url, std::string_view fetched_at);

/// Fetches each object's target page and fills its in_target properties.
/// Objects whose in_target values are all present are left alone, so a second
/// pass is a no-op. Failures leave the values missing and add a diagnostic.
std::vector<DomainObject> enrich_in_target(std::vector<DomainObject> objects, const SearchResultSpec& spec,
                                           Fetcher& fetcher, std::vector<std::string>* diagnostics = nullptr);

/// Collapses whitespace runs (including NBSP) to one space and trims.
std::string normalize_text(std::string_view raw);

/// Reads one property from `scope` (in_result) or a target document root.
PropertyValue read_property(const PropertySpec& prop, const html::Node& scope, std::string_view base_url);

nlohmann::json to_json(const PropertyValue& v);
nlohmann::json to_json(const DomainObject& o);
nlohmann::json to_json(const ResultSet& rs);

}  // namespace svc
