#pragma once

#include <memory>
#include <string_view>

#include "svc/engine.hpp"

namespace svc {

inline constexpr std::string_view kFixtureJsonProvider = "fixture-json";

/// Reference api_based provider for JSON search APIs shaped like the fixture
/// harness's /jsonapi: GET search_page_url?q=..&page=.. returning
/// {"total": n, "page": p, "page_size": k, "items": [{"url": .., <property>: ..}]}.
/// Filter and remote-ordering modifiers are applied to that request. Item
/// fields named like in_result properties become their values.
std::shared_ptr<SearchProvider> make_fixture_json_provider();

}  // namespace svc
