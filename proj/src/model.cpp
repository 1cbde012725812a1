#include "svc/model.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>

namespace svc {

const PropertySpec* SearchResultSpec::find_property(std::string_view name) const {
  auto it = std::find_if(properties.begin(), properties.end(),
                         [&](const PropertySpec& p) { return p.name == name; });
  return it == properties.end() ? nullptr : &*it;
}

bool SearchResultSpec::has_in_target() const {
  return std::any_of(properties.begin(), properties.end(), [](const PropertySpec& p) {
    return p.location == PropertyLocation::in_target;
  });
}

const Condition* ConditionManager::find(std::string_view name) const {
  for (const auto& g : groups)
    for (const auto& c : g.conditions)
      if (c.name == name) return &c;
  return nullptr;
}

const ConditionGroup* ConditionManager::group_of(std::string_view condition_name) const {
  for (const auto& g : groups)
    for (const auto& c : g.conditions)
      if (c.name == condition_name) return &g;
  return nullptr;
}

bool ConditionManager::empty() const {
  return std::all_of(groups.begin(), groups.end(),
                     [](const ConditionGroup& g) { return g.conditions.empty(); });
}

bool RequestTemplate::has_page_placeholder() const {
  if (url_template.find("{page}") != std::string::npos) return true;
  return std::any_of(static_params.begin(), static_params.end(), [](const NameValue& p) {
    return p.second.find("{page}") != std::string::npos;
  });
}

bool RequestTemplate::has_query_placeholder() const {
  if (url_template.find("{query}") != std::string::npos) return true;
  return std::any_of(static_params.begin(), static_params.end(), [](const NameValue& p) {
    return p.second.find("{query}") != std::string::npos;
  });
}

const OrderingSpec* ServiceSpec::find_ordering(std::string_view name) const {
  auto it = std::find_if(orderings.begin(), orderings.end(),
                         [&](const OrderingSpec& o) { return o.name == name; });
  return it == orderings.end() ? nullptr : &*it;
}

std::string_view to_string(SelectorKind kind) {
  return kind == SelectorKind::css ? "css" : "xpath";
}

std::string_view to_string(PropertyLocation loc) {
  return loc == PropertyLocation::in_result ? "in_result" : "in_target";
}

std::string_view to_string(StrategyVariant variant) {
  switch (variant) {
    case StrategyVariant::write_and_click_to_reload: return "write_and_click_to_reload";
    case StrategyVariant::write_and_click_for_ajax_call: return "write_and_click_for_ajax_call";
    case StrategyVariant::write_for_ajax_call: return "write_for_ajax_call";
    case StrategyVariant::api_based: return "api_based";
  }
  return "";
}

std::string_view to_string(HttpMethod method) { return method == HttpMethod::get ? "GET" : "POST"; }

std::string_view to_string(ResponseKind kind) {
  return kind == ResponseKind::full_document ? "full_document" : "html_fragment";
}

std::string_view to_string(SortDirection dir) { return dir == SortDirection::asc ? "asc" : "desc"; }

std::string_view to_string(SortComparator cmp) {
  switch (cmp) {
    case SortComparator::lexical: return "lexical";
    case SortComparator::numeric: return "numeric";
    case SortComparator::date: return "date";
  }
  return "";
}

std::optional<SelectorKind> selector_kind_from(std::string_view s) {
  if (s == "css") return SelectorKind::css;
  if (s == "xpath") return SelectorKind::xpath;
  return std::nullopt;
}

std::optional<StrategyVariant> strategy_variant_from(std::string_view s) {
  for (auto v : {StrategyVariant::write_and_click_to_reload,
                 StrategyVariant::write_and_click_for_ajax_call,
                 StrategyVariant::write_for_ajax_call, StrategyVariant::api_based}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

std::string now_timestamp() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace svc
