#include "svc/json_provider.hpp"

#include "svc/error.hpp"
#include "svc/serialize.hpp"
#include "svc/url.hpp"

namespace svc {

namespace {

class FixtureJsonProvider : public SearchProvider {
 public:
  ProviderPage execute(const ServiceSpec& spec, const SearchQuery& query, Fetcher& fetcher) override {
    const std::string& base = spec.binding.search_page_url;
    RequestTemplate tmpl;
    tmpl.url_template = base;
    tmpl.static_params = {{"q", "{query}"}, {"page", "{page}"}};
    HttpRequestPlan plan = instantiate(tmpl, base, query.keywords, query.page);
    for (const auto& name : query.active_filters)
      if (const Condition* c = spec.filters.find(name)) apply_modifier(plan, c->activation, base, query.keywords, query.page);
    if (query.active_ordering) {
      if (const OrderingSpec* o = spec.find_ordering(*query.active_ordering))
        if (const auto* r = std::get_if<RemoteOrdering>(&o->mode))
          apply_modifier(plan, r->modifier, base, query.keywords, query.page);
    }

    FetchResponse res = fetcher.fetch(plan);
    if (!res.ok()) throw Error(Errc::fetch_failed, "HTTP " + std::to_string(res.status) + " from " + plan.target_url());
    json doc;
    try {
      doc = parse_json(res.body);
    } catch (const Error& e) {
      throw Error(Errc::fetch_failed, std::string("provider response is not JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("items") || !doc["items"].is_array())
      throw Error(Errc::fetch_failed, "provider response lacks an items array");

    ProviderPage page;
    std::string fetched_at = now_timestamp();
    std::size_t index = 0;
    for (const auto& item : doc["items"]) {
      std::size_t container = index++;
      if (!item.is_object() || !item.contains("url") || !item["url"].is_string()) continue;
      DomainObject obj;
      obj.type_name = spec.result_spec.type_name;
      obj.target_url = url::resolve(res.final_url, item["url"].get<std::string>());
      obj.provenance = {res.final_url, container, fetched_at};
      for (const auto& prop : spec.result_spec.properties) {
        PropertyValue v;
        if (prop.location == PropertyLocation::in_result) {
          auto it = item.find(prop.name);
          if (it != item.end() && it->is_string()) v = PropertyValue::text(it->get<std::string>());
          else if (it != item.end() && it->is_number()) v = PropertyValue::text(it->dump());
        }
        obj.values[prop.name] = v;
      }
      page.items.push_back(std::move(obj));
    }
    long total = doc.value("total", 0L);
    long page_size = doc.value("page_size", static_cast<long>(page.items.size()));
    page.has_next = page_size > 0 && static_cast<long>(query.page) * page_size < total;
    return page;
  }
};

}  // namespace

std::shared_ptr<SearchProvider> make_fixture_json_provider() { return std::make_shared<FixtureJsonProvider>(); }

}  // namespace svc
