#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "svc/extraction.hpp"
#include "svc/fetcher.hpp"
#include "svc/html.hpp"
#include "svc/model.hpp"

namespace svc {

struct PageCursor {
  std::string service_id;
  SearchQuery query;
  int page_index = 1;
  bool has_next = false;
  bool has_prev = false;

  // Continuation state: the spec the cursor came from and, when pagination
  // follows links, the already-resolved requests for the neighbouring pages.
  std::shared_ptr<const ServiceSpec> spec;
  std::optional<HttpRequestPlan> next_request;
  std::optional<HttpRequestPlan> prev_request;
};

struct SearchOutcome {
  ResultSet results;
  PageCursor cursor;
};

/// Page returned by an api_based provider. Items need not be ordered locally;
/// the engine applies local orderings afterwards.
struct ProviderPage {
  std::vector<DomainObject> items;
  bool has_next = false;
};

class SearchProvider {
 public:
  virtual ~SearchProvider() = default;
  virtual ProviderPage execute(const ServiceSpec& spec, const SearchQuery& query, Fetcher& fetcher) = 0;
};

class ProviderRegistry {
 public:
  /// Throws Error(Errc::duplicate_provider).
  void register_provider(const std::string& id, std::shared_ptr<SearchProvider> provider);
  std::shared_ptr<SearchProvider> find(const std::string& id) const;
  std::vector<std::string> ids() const;

  /// Process-wide registry with the fixture JSON provider preinstalled.
  static ProviderRegistry& global();

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<SearchProvider>> providers_;
};

struct EngineOptions {
  ProviderRegistry* providers = nullptr;  // nullptr = ProviderRegistry::global()
  std::function<std::string()> clock;     // fetched_at source; defaults to now_timestamp
  bool enrich = false;
};

/// Form-submission request template for the bound input: action, method,
/// every successful control of the enclosing form in document order, with the
/// input's value replaced by "{query}". `param_name` overrides the input's
/// name. Errors: input-not-found, ambiguous-input, input-has-no-name.
RequestTemplate form_template(const html::Document& doc, const EngineBinding& binding,
                              const std::string& param_name = {});

HttpRequestPlan derive_form_request(const html::Document& doc, const EngineBinding& binding,
                                    std::string_view keywords);

/// Expands a template for one query page, resolving relative URLs against `base`.
HttpRequestPlan instantiate(const RequestTemplate& tmpl, std::string_view base, std::string_view keywords,
                            int page);

void apply_modifier(HttpRequestPlan& plan, const RequestModifier& modifier, std::string_view base,
                    std::string_view keywords, int page);

/// The request execute() would send for this query's first hop. For the
/// reload strategy without a stored template this fetches the search page.
HttpRequestPlan plan_request(const ServiceSpec& spec, const SearchQuery& query, Fetcher& fetcher);

SearchOutcome execute(const ServiceSpec& spec, const SearchQuery& query, Fetcher& fetcher,
                      const EngineOptions& options = {});
SearchOutcome next_page(const PageCursor& cursor, Fetcher& fetcher, const EngineOptions& options = {});
SearchOutcome prev_page(const PageCursor& cursor, Fetcher& fetcher, const EngineOptions& options = {});

/// Stable sort of `items` by a local ordering. Missing values sort last.
void apply_local_ordering(std::vector<DomainObject>& items, const LocalOrdering& ordering);

/// Tries each UI strategy against two probe queries and returns the first
/// whose results are non-empty for both and differ between them.
/// Throws Error(Errc::no_applicable_strategy) listing why each variant failed.
StrategyConfig detect_strategy(const ServiceSpec& draft, std::string_view probe_a, std::string_view probe_b,
                               Fetcher& fetcher);

}  // namespace svc
