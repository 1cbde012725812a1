#pragma once

// Random values over the ServiceSpec grammar, shared by the unit and
// acceptance round-trip checks.

#include <random>
#include <string>

#include "svc/extraction.hpp"
#include "svc/model.hpp"

namespace svc::testing {

class SpecGenerator {
 public:
  explicit SpecGenerator(std::uint64_t seed) : rng_(seed) {}

  std::string text(int max_len = 12) {
    static const std::string alphabet =
        "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 -_.,:;/?&=#\"'<>{}[]\\\t\n";
    static const char* const unicode[] = {"\xC3\xA1", "\xC3\xB1", "\xE2\x80\xA6", "\xF0\x9F\x93\x9A"};
    int len = pick(0, max_len);
    std::string out;
    for (int i = 0; i < len; ++i) {
      if (pick(0, 9) == 0) out += unicode[pick(0, 3)];
      else out += alphabet[static_cast<std::size_t>(pick(0, static_cast<int>(alphabet.size()) - 1))];
    }
    return out;
  }

  // No braces, so nothing reads as a template placeholder.
  std::string safe_text(int max_len = 8) {
    std::string out = text(max_len);
    for (auto& c : out)
      if (c == '{' || c == '}') c = '_';
    return out;
  }

  Selector selector(bool many = false) {
    if (coin()) return Selector::css(coin() ? "li.result" : "#x" + std::to_string(pick(0, 99)), many);
    return Selector::xpath("//div[" + std::to_string(pick(1, 5)) + "]/a", many);
  }

  RequestModifier modifier() {
    switch (pick(0, 2)) {
      case 0: return UrlOverride{"http://h/" + safe_text(5) + "?q={query}"};
      case 1: {
        ParamSet p;
        for (int i = 0, n = pick(1, 3); i < n; ++i) p.params.emplace_back("p" + std::to_string(i), safe_text(6));
        return p;
      }
      default: return PathSuffix{"/" + safe_text(6)};
    }
  }

  PropertySpec property(const std::string& prop_name, bool in_target) {
    PropertySpec p;
    p.name = prop_name;
    p.location = in_target ? PropertyLocation::in_target : PropertyLocation::in_result;
    p.selector = selector();
    switch (pick(0, 2)) {
      case 0: p.extract = ExtractRule::text(); break;
      case 1: p.extract = ExtractRule::attr(coin() ? "href" : "data-" + std::to_string(pick(0, 9))); break;
      default: p.extract = ExtractRule::inner_html(); break;
    }
    return p;
  }

  /// With valid_only the result always passes validate_spec.
  ServiceSpec spec(bool valid_only = true) {
    ServiceSpec s;
    s.id = "svc-" + std::to_string(pick(0, 1 << 30));
    s.name = "N" + text(20);
    s.binding.search_page_url = "https://example.org/" + std::to_string(pick(0, 999));
    s.binding.input = selector();
    if (coin()) s.binding.trigger = selector();
    if (coin()) s.binding.next_page = selector();
    if (coin()) s.binding.prev_page = selector();
    if (coin()) s.binding.reveal = selector();
    if (coin()) {
      StrategyConfig st;
      st.variant = static_cast<StrategyVariant>(pick(0, 3));
      if (st.variant == StrategyVariant::api_based) st.provider_id = "prov" + safe_text(4);
      bool ajax = st.variant == StrategyVariant::write_and_click_for_ajax_call ||
                  st.variant == StrategyVariant::write_for_ajax_call;
      if (ajax || coin()) {
        RequestTemplate t;
        t.method = coin() ? HttpMethod::get : HttpMethod::post;
        t.url_template = "https://example.org/s?q={query}" + std::string(coin() ? "&p={page}" : "");
        for (int i = 0, n = pick(0, 3); i < n; ++i) t.static_params.emplace_back("k" + safe_text(4), safe_text(6));
        t.response_kind = coin() ? ResponseKind::full_document : ResponseKind::html_fragment;
        st.request_template = t;
      }
      s.strategy = st;
    }
    s.result_spec.type_name = "T" + text(10);
    s.result_spec.container = selector(true);
    if (valid_only || pick(0, 9) != 0) {
      PropertySpec t = property("target_url", false);
      t.extract = ExtractRule::attr("href");
      s.result_spec.target_url = t;
    }
    for (int i = 0, n = pick(1, 5); i < n; ++i) s.result_spec.properties.push_back(property("p" + std::to_string(i) + text(3), coin()));
    for (int g = 0, n = pick(0, 2); g < n; ++g) {
      ConditionGroup group{"G" + text(8), coin(), {}};
      for (int i = 0, m = pick(0, 3); i < m; ++i) group.conditions.push_back({"c" + std::to_string(g) + "_" + std::to_string(i), modifier()});
      s.filters.groups.push_back(group);
    }
    for (int i = 0, n = pick(0, 3); i < n; ++i) {
      OrderingSpec o;
      o.name = "o" + std::to_string(i) + text(4);
      if (coin()) {
        o.mode = RemoteOrdering{modifier()};
      } else {
        o.mode = LocalOrdering{s.result_spec.properties[0].name, coin() ? SortDirection::asc : SortDirection::desc,
                               static_cast<SortComparator>(pick(0, 2))};
      }
      s.orderings.push_back(o);
    }
    for (int i = 0, n = pick(0, 3); i < n; ++i) s.metadata.tags.push_back(text(6));
    s.metadata.created = "20" + std::to_string(pick(10, 29)) + "-0" + std::to_string(pick(1, 9)) + "-1" +
                         std::to_string(pick(0, 9)) + "T12:34:56Z";
    return s;
  }

  /// A result set whose items carry the given property names; some values
  /// are missing and values repeat so grouping has something to do.
  ResultSet result_set(const std::vector<std::string>& properties) {
    ResultSet rs;
    rs.service_id = "random";
    for (int i = 0, n = pick(0, 40); i < n; ++i) {
      DomainObject o;
      o.type_name = "Item";
      o.target_url = "http://h/item/" + std::to_string(i);
      o.provenance = {"http://h/", static_cast<std::size_t>(i), ""};
      for (const auto& p : properties)
        o.values[p] = pick(0, 4) == 0 ? PropertyValue::missing() : PropertyValue::text("v" + std::to_string(pick(0, 4)));
      rs.items.push_back(o);
    }
    return rs;
  }

  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return pick(0, 1) == 1; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace svc::testing
