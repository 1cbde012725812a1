#pragma once

// Search Service domain types. Everything here is a plain value: construct,
// validate with validate_spec(), then share freely between threads.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace svc {

inline constexpr std::string_view kFormatVersion = "1";

using NameValue = std::pair<std::string, std::string>;

enum class SelectorKind { css, xpath };

struct Selector {
  SelectorKind kind = SelectorKind::css;
  std::string expression;
  bool expect_many = false;

  static Selector css(std::string expr, bool many = false) {
    return {SelectorKind::css, std::move(expr), many};
  }
  static Selector xpath(std::string expr, bool many = false) {
    return {SelectorKind::xpath, std::move(expr), many};
  }

  bool operator==(const Selector&) const = default;
};

struct EngineBinding {
  std::string search_page_url;
  Selector input;
  std::optional<Selector> trigger;
  std::optional<Selector> next_page;
  std::optional<Selector> prev_page;
  std::optional<Selector> reveal;  // for inputs hidden until some element is clicked

  bool operator==(const EngineBinding&) const = default;
};

enum class PropertyLocation { in_result, in_target };

struct ExtractRule {
  enum class Kind { text, attribute, inner_html };
  Kind kind = Kind::text;
  std::string attribute;  // only for Kind::attribute

  static ExtractRule text() { return {Kind::text, {}}; }
  static ExtractRule attr(std::string name) { return {Kind::attribute, std::move(name)}; }
  static ExtractRule inner_html() { return {Kind::inner_html, {}}; }

  bool operator==(const ExtractRule&) const = default;
};

struct PropertySpec {
  std::string name;
  PropertyLocation location = PropertyLocation::in_result;
  Selector selector;
  ExtractRule extract;

  bool operator==(const PropertySpec&) const = default;
};

struct SearchResultSpec {
  std::string type_name;
  Selector container;
  // Mandatory for a valid spec; optional here so drafts can be reported on.
  std::optional<PropertySpec> target_url;
  std::vector<PropertySpec> properties;

  const PropertySpec* find_property(std::string_view name) const;
  bool has_in_target() const;

  bool operator==(const SearchResultSpec&) const = default;
};

struct UrlOverride {
  std::string url_template;
  bool operator==(const UrlOverride&) const = default;
};
struct ParamSet {
  std::vector<NameValue> params;
  bool operator==(const ParamSet&) const = default;
};
struct PathSuffix {
  std::string suffix;
  bool operator==(const PathSuffix&) const = default;
};

/// How activating a filter or remote ordering changes the outgoing request.
using RequestModifier = std::variant<UrlOverride, ParamSet, PathSuffix>;

struct Condition {
  std::string name;
  RequestModifier activation;
  bool operator==(const Condition&) const = default;
};

struct ConditionGroup {
  std::string group_name;
  bool exclusive = false;
  std::vector<Condition> conditions;
  bool operator==(const ConditionGroup&) const = default;
};

struct ConditionManager {
  std::vector<ConditionGroup> groups;

  const Condition* find(std::string_view name) const;
  const ConditionGroup* group_of(std::string_view condition_name) const;
  bool empty() const;

  bool operator==(const ConditionManager&) const = default;
};

enum class SortDirection { asc, desc };
enum class SortComparator { lexical, numeric, date };

struct RemoteOrdering {
  RequestModifier modifier;
  bool operator==(const RemoteOrdering&) const = default;
};

struct LocalOrdering {
  std::string property;
  SortDirection direction = SortDirection::asc;
  SortComparator comparator = SortComparator::lexical;
  bool operator==(const LocalOrdering&) const = default;
};

struct OrderingSpec {
  std::string name;
  std::variant<RemoteOrdering, LocalOrdering> mode;
  bool operator==(const OrderingSpec&) const = default;
};

enum class StrategyVariant {
  write_and_click_to_reload,
  write_and_click_for_ajax_call,
  write_for_ajax_call,
  api_based,
};

enum class HttpMethod { get, post };
enum class ResponseKind { full_document, html_fragment };

/// `{query}` and `{page}` placeholders may appear in url_template and in
/// static parameter values.
struct RequestTemplate {
  HttpMethod method = HttpMethod::get;
  std::string url_template;
  std::vector<NameValue> static_params;
  ResponseKind response_kind = ResponseKind::full_document;

  bool has_page_placeholder() const;
  bool has_query_placeholder() const;

  bool operator==(const RequestTemplate&) const = default;
};

struct StrategyConfig {
  StrategyVariant variant = StrategyVariant::write_and_click_to_reload;
  std::string provider_id;  // api_based only
  std::optional<RequestTemplate> request_template;

  bool operator==(const StrategyConfig&) const = default;
};

struct ServiceMetadata {
  std::vector<std::string> tags;
  std::string created;  // RFC 3339 UTC, e.g. 2016-12-01T00:00:00Z
  std::string format_version{kFormatVersion};

  bool operator==(const ServiceMetadata&) const = default;
};

struct ServiceSpec {
  std::string id;
  std::string name;
  EngineBinding binding;
  // Absent until detect_strategy (or a human) fills it in.
  std::optional<StrategyConfig> strategy;
  SearchResultSpec result_spec;
  ConditionManager filters;
  std::vector<OrderingSpec> orderings;
  ServiceMetadata metadata;

  const OrderingSpec* find_ordering(std::string_view name) const;

  bool operator==(const ServiceSpec&) const = default;
};

struct SearchQuery {
  std::string keywords;
  std::vector<std::string> active_filters;
  std::optional<std::string> active_ordering;
  int page = 1;

  bool operator==(const SearchQuery&) const = default;
};

std::string_view to_string(SelectorKind kind);
std::string_view to_string(PropertyLocation loc);
std::string_view to_string(StrategyVariant variant);
std::string_view to_string(HttpMethod method);
std::string_view to_string(ResponseKind kind);
std::string_view to_string(SortDirection dir);
std::string_view to_string(SortComparator cmp);

std::optional<SelectorKind> selector_kind_from(std::string_view s);

/// Current UTC time as RFC 3339 with second precision.
std::string now_timestamp();
std::optional<StrategyVariant> strategy_variant_from(std::string_view s);

}  // namespace svc
