#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "svc/model.hpp"

namespace svc {

using json = nlohmann::json;

// Canonical JSON: keys sorted, absent optionals omitted, two-space indent and
// a trailing newline. serialize(deserialize(x)) == x for canonical input.

json to_json(const Selector& s);
json to_json(const PropertySpec& p);
json to_json(const RequestModifier& m);
json to_json(const StrategyConfig& s);
json to_json(const SearchQuery& q);
json to_json(const ServiceSpec& spec);

/// Schema-checked conversions. Errors name the offending field path and
/// throw Error(Errc::parse_error); a foreign format_version throws
/// Error(Errc::version_mismatch).
Selector selector_from_json(const json& j, const std::string& path = "selector");
StrategyConfig strategy_from_json(const json& j, const std::string& path = "strategy");
SearchQuery query_from_json(const json& j, const std::string& path = "query");
ServiceSpec spec_from_json(const json& j);

std::string serialize(const ServiceSpec& spec);
/// Parses text; syntax errors report line and column.
ServiceSpec deserialize(std::string_view text);

/// Parses JSON text into a document, reporting line/column on failure.
json parse_json(std::string_view text);
std::string dump_canonical(const json& j);

std::string export_bundle(const std::vector<ServiceSpec>& specs);

struct RejectedEntry {
  std::size_t index = 0;
  std::string id;  // empty when the entry had no readable id
  std::vector<std::string> reasons;
};

struct ImportResult {
  std::vector<ServiceSpec> imported;
  std::vector<RejectedEntry> rejected;
  // (original id, assigned id) for entries whose id collided
  std::vector<std::pair<std::string, std::string>> renamed;
};

/// Reads an export bundle (or a single spec document). Entries that fail to
/// parse or validate are rejected individually. Colliding ids, either with
/// `id_taken` or earlier entries of the same bundle, get a "-N" suffix and
/// " (imported)" appended to their name.
ImportResult import_bundle(std::string_view text,
                           const std::function<bool(const std::string&)>& id_taken = {});

}  // namespace svc
