#include "svc/engine.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <mutex>

#include "svc/error.hpp"
#include "svc/json_provider.hpp"
#include "svc/selector.hpp"
#include "svc/url.hpp"
#include "svc/validate.hpp"

namespace svc {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string substitute(std::string text, std::string_view query, int page) {
  auto replace_all = [&](std::string_view key, std::string_view value) {
    for (auto pos = text.find(key); pos != std::string::npos; pos = text.find(key, pos + value.size()))
      text.replace(pos, key.size(), value);
  };
  replace_all("{query}", query);
  replace_all("{page}", std::to_string(page));
  return text;
}

bool is_ajax(StrategyVariant v) {
  return v == StrategyVariant::write_and_click_for_ajax_call || v == StrategyVariant::write_for_ajax_call;
}

const html::Node* enclosing_form(const html::Document& doc, const html::Node& input) {
  if (const std::string* id = input.attr("form")) {
    auto found = evaluate(Selector::xpath("//form[@id=" + xpath::literal(*id) + "]"), doc);
    if (!found.empty()) return found.front();
  }
  for (const html::Node* p = input.parent_element(); p; p = p->parent_element())
    if (p->is_element("form")) return p;
  return nullptr;
}

void collect_controls(const html::Node& node, const html::Node& target, const std::string& target_name,
                      std::vector<NameValue>& out) {
  for (const auto& child : node.children) {
    if (!child->is_element()) continue;
    const html::Node& el = *child;
    const std::string* name = el.attr("name");
    if (&el == &target) {
      out.emplace_back(target_name, "{query}");
      continue;
    }
    if (el.has_attr("disabled")) continue;
    if (el.name == "input") {
      std::string type = el.attr("type") ? lower(*el.attr("type")) : "text";
      if (!name || name->empty()) continue;
      if (type == "submit" || type == "image" || type == "button" || type == "reset" || type == "file") continue;
      if (type == "checkbox" || type == "radio") {
        if (el.has_attr("checked")) out.emplace_back(*name, el.attr("value") ? *el.attr("value") : "on");
        continue;
      }
      out.emplace_back(*name, el.attr("value") ? *el.attr("value") : "");
      continue;
    }
    if (el.name == "select") {
      if (!name || name->empty()) continue;
      auto options = evaluate(Selector::css("option"), el);
      bool multiple = el.has_attr("multiple");
      bool any = false;
      for (const html::Node* opt : options) {
        if (!opt->has_attr("selected")) continue;
        out.emplace_back(*name, opt->attr("value") ? *opt->attr("value") : html::text_content(*opt));
        any = true;
        if (!multiple) break;
      }
      if (!any && !multiple && !options.empty()) {
        const html::Node* opt = options.front();
        out.emplace_back(*name, opt->attr("value") ? *opt->attr("value") : html::text_content(*opt));
      }
      continue;
    }
    if (el.name == "textarea") {
      if (name && !name->empty()) out.emplace_back(*name, html::text_content(el));
      continue;
    }
    collect_controls(el, target, target_name, out);
  }
}

const html::Node* unique_input(const html::Document& doc, const EngineBinding& binding) {
  auto matches = evaluate(binding.input, doc);
  if (matches.empty())
    throw Error(Errc::input_not_found, "input selector '" + binding.input.expression + "' matched nothing");
  if (matches.size() > 1)
    throw Error(Errc::ambiguous_input, "input selector '" + binding.input.expression + "' matched " +
                                           std::to_string(matches.size()) + " elements");
  return matches.front();
}

FetchResponse fetch_ok(Fetcher& fetcher, const HttpRequestPlan& plan) {
  FetchResponse res = fetcher.fetch(plan);
  if (!res.ok())
    throw Error(Errc::fetch_failed, "HTTP " + std::to_string(res.status) + " from " + plan.target_url());
  return res;
}

html::Document fetch_document(Fetcher& fetcher, const std::string& page_url) {
  FetchResponse res = fetch_ok(fetcher, get_plan(page_url));
  return html::Document::parse(res.body, res.final_url);
}

/// The template the strategy runs with, deriving the form template on use.
RequestTemplate effective_template(const ServiceSpec& spec, Fetcher& fetcher) {
  const StrategyConfig& st = *spec.strategy;
  if (st.request_template) return *st.request_template;
  if (st.variant != StrategyVariant::write_and_click_to_reload)
    throw Error(Errc::strategy_unconfigured, "strategy " + std::string(to_string(st.variant)) +
                                                 " has no request template");
  html::Document doc = fetch_document(fetcher, spec.binding.search_page_url);
  return form_template(doc, spec.binding);
}

HttpRequestPlan build_plan(const ServiceSpec& spec, const SearchQuery& query, const RequestTemplate& tmpl) {
  const std::string& base = spec.binding.search_page_url;
  int page = tmpl.has_page_placeholder() ? query.page : 1;
  HttpRequestPlan plan = instantiate(tmpl, base, query.keywords, page);
  if (is_ajax(spec.strategy->variant)) plan.headers.emplace_back("X-Requested-With", "XMLHttpRequest");
  for (const auto& name : query.active_filters) {
    if (const Condition* c = spec.filters.find(name)) apply_modifier(plan, c->activation, base, query.keywords, page);
  }
  if (query.active_ordering) {
    if (const OrderingSpec* o = spec.find_ordering(*query.active_ordering)) {
      if (const auto* r = std::get_if<RemoteOrdering>(&o->mode))
        apply_modifier(plan, r->modifier, base, query.keywords, page);
    }
  }
  return plan;
}

std::optional<HttpRequestPlan> link_plan(const html::Document& doc, const std::optional<Selector>& control,
                                         const HttpRequestPlan& origin) {
  if (!control) return std::nullopt;
  auto found = evaluate(*control, doc);
  if (found.empty()) return std::nullopt;
  const std::string* href = found.front()->attr("href");
  if (!href || href->empty()) return std::nullopt;
  std::string target = url::resolve(doc.base_url(), *href);
  if (!url::is_absolute_http(target)) return std::nullopt;
  HttpRequestPlan plan = get_plan(target);
  plan.headers = origin.headers;
  return plan;
}

void check_query(const ServiceSpec& spec, const SearchQuery& query) {
  auto report = validate_query(spec, query);
  if (!report.ok()) throw Error(Errc::validation, report.summary());
  if (!spec.strategy) throw Error(Errc::strategy_unconfigured, "service '" + spec.id + "' has no strategy");
}

std::string clock_now(const EngineOptions& options) { return options.clock ? options.clock() : now_timestamp(); }

ProviderRegistry& registry_of(const EngineOptions& options) {
  return options.providers ? *options.providers : ProviderRegistry::global();
}

/// Extracts a fetched page and assembles the outcome.
SearchOutcome finish(std::shared_ptr<const ServiceSpec> spec, const SearchQuery& query, const FetchResponse& res,
                     const HttpRequestPlan& plan, bool template_paged, Fetcher& fetcher,
                     const EngineOptions& options) {
  html::Document doc = html::Document::parse(res.body, res.final_url);
  ExtractionOutput ex = extract_results(doc, spec->result_spec, res.final_url, clock_now(options));

  SearchOutcome out;
  PageCursor& cursor = out.cursor;
  cursor.service_id = spec->id;
  cursor.query = query;
  cursor.page_index = query.page;
  cursor.has_prev = query.page > 1;
  cursor.spec = spec;
  if (template_paged) {
    if (spec->binding.next_page)
      cursor.has_next = !evaluate(*spec->binding.next_page, doc).empty();
    else
      cursor.has_next = !ex.objects.empty();
  } else {
    cursor.next_request = link_plan(doc, spec->binding.next_page, plan);
    if (query.page > 1) cursor.prev_request = link_plan(doc, spec->binding.prev_page, plan);
    cursor.has_next = cursor.next_request.has_value();
  }

  ResultSet& rs = out.results;
  rs.service_id = spec->id;
  rs.query = query;
  rs.items = std::move(ex.objects);
  rs.dropped = ex.dropped;
  rs.diagnostics = std::move(ex.diagnostics);
  if (rs.items.empty()) rs.diagnostics.push_back("extraction yielded no results");
  if (query.active_ordering) {
    if (const OrderingSpec* o = spec->find_ordering(*query.active_ordering)) {
      if (const auto* l = std::get_if<LocalOrdering>(&o->mode)) apply_local_ordering(rs.items, *l);
    }
  }
  if (options.enrich) rs.items = enrich_in_target(std::move(rs.items), spec->result_spec, fetcher, &rs.diagnostics);
  rs.page = {cursor.page_index, cursor.has_next, cursor.has_prev};
  return out;
}

SearchOutcome run(std::shared_ptr<const ServiceSpec> spec, const SearchQuery& query, Fetcher& fetcher,
                  const EngineOptions& options) {
  check_query(*spec, query);
  const StrategyConfig& st = *spec->strategy;

  if (st.variant == StrategyVariant::api_based) {
    auto provider = registry_of(options).find(st.provider_id);
    if (!provider) throw Error(Errc::strategy_unconfigured, "no provider registered as '" + st.provider_id + "'");
    ProviderPage page = provider->execute(*spec, query, fetcher);
    SearchOutcome out;
    out.cursor.service_id = spec->id;
    out.cursor.query = query;
    out.cursor.page_index = query.page;
    out.cursor.has_next = page.has_next;
    out.cursor.has_prev = query.page > 1;
    out.cursor.spec = spec;
    ResultSet& rs = out.results;
    rs.service_id = spec->id;
    rs.query = query;
    rs.items = std::move(page.items);
    std::string now = clock_now(options);
    for (auto& item : rs.items) item.provenance.fetched_at = now;
    if (query.active_ordering) {
      if (const OrderingSpec* o = spec->find_ordering(*query.active_ordering)) {
        if (const auto* l = std::get_if<LocalOrdering>(&o->mode)) apply_local_ordering(rs.items, *l);
      }
    }
    if (options.enrich) rs.items = enrich_in_target(std::move(rs.items), spec->result_spec, fetcher, &rs.diagnostics);
    rs.page = {query.page, page.has_next, query.page > 1};
    return out;
  }

  RequestTemplate tmpl = effective_template(*spec, fetcher);
  HttpRequestPlan plan = build_plan(*spec, query, tmpl);
  if (tmpl.has_page_placeholder()) {
    FetchResponse res = fetch_ok(fetcher, plan);
    return finish(spec, query, res, plan, true, fetcher, options);
  }

  FetchResponse res = fetch_ok(fetcher, plan);
  for (int page = 2; page <= query.page; ++page) {
    html::Document doc = html::Document::parse(res.body, res.final_url);
    auto next = link_plan(doc, spec->binding.next_page, plan);
    if (!next)
      throw Error(Errc::no_such_page, "page " + std::to_string(query.page) + " is not reachable; results end at page " +
                                          std::to_string(page - 1));
    plan = *next;
    res = fetch_ok(fetcher, plan);
  }
  return finish(spec, query, res, plan, false, fetcher, options);
}

int compare_values(const PropertyValue& a, const PropertyValue& b, SortComparator cmp) {
  switch (cmp) {
    case SortComparator::numeric: {
      char* end_a = nullptr;
      char* end_b = nullptr;
      double x = std::strtod(a.value.c_str(), &end_a);
      double y = std::strtod(b.value.c_str(), &end_b);
      bool ok_a = end_a != a.value.c_str();
      bool ok_b = end_b != b.value.c_str();
      if (ok_a != ok_b) return ok_a ? -1 : 1;
      if (!ok_a) return a.value.compare(b.value);
      return x < y ? -1 : (y < x ? 1 : 0);
    }
    case SortComparator::date:
    case SortComparator::lexical: {
      std::string la = lower(a.value), lb = lower(b.value);
      if (int c = la.compare(lb)) return c < 0 ? -1 : 1;
      return a.value.compare(b.value) < 0 ? -1 : (a.value == b.value ? 0 : 1);
    }
  }
  return 0;
}

std::optional<RequestTemplate> hinted_template(const html::Document& doc, const std::vector<const html::Node*>& elements,
                                               const std::string& param_name) {
  static const char* const kHints[] = {"data-endpoint", "data-url", "data-source", "hx-get", "hx-post"};
  for (const html::Node* el : elements) {
    if (!el) continue;
    for (const char* hint : kHints) {
      const std::string* value = el->attr(hint);
      if (!value || value->empty()) continue;
      RequestTemplate t;
      bool post = std::string_view(hint) == "hx-post" ||
                  (el->attr("data-method") && lower(*el->attr("data-method")) == "post");
      t.method = post ? HttpMethod::post : HttpMethod::get;
      t.url_template = url::resolve(doc.base_url(), *value);
      if (value->find("{query}") == std::string::npos) {
        if (post) {
          t.static_params.emplace_back(param_name, "{query}");
        } else {
          t.url_template += (t.url_template.find('?') == std::string::npos ? "?" : "&") + param_name + "={query}";
        }
      }
      return t;
    }
  }
  return std::nullopt;
}

ResponseKind sniff(std::string_view body) {
  std::size_t i = 0;
  while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) ++i;
  std::string head = lower(body.substr(i, 9));
  if (head.rfind("<!doctype", 0) == 0 || head.rfind("<html", 0) == 0) return ResponseKind::full_document;
  return ResponseKind::html_fragment;
}

}  // namespace

void ProviderRegistry::register_provider(const std::string& id, std::shared_ptr<SearchProvider> provider) {
  std::unique_lock lock(mutex_);
  if (!provider) throw Error(Errc::invalid_argument, "provider is null");
  if (!providers_.emplace(id, std::move(provider)).second)
    throw Error(Errc::duplicate_provider, "provider '" + id + "' is already registered");
}

std::shared_ptr<SearchProvider> ProviderRegistry::find(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = providers_.find(id);
  return it == providers_.end() ? nullptr : it->second;
}

std::vector<std::string> ProviderRegistry::ids() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, p] : providers_) out.push_back(id);
  return out;
}

ProviderRegistry& ProviderRegistry::global() {
  static ProviderRegistry* registry = [] {
    auto* r = new ProviderRegistry;
    r->register_provider(std::string(kFixtureJsonProvider), make_fixture_json_provider());
    return r;
  }();
  return *registry;
}

RequestTemplate form_template(const html::Document& doc, const EngineBinding& binding, const std::string& param_name) {
  const html::Node* input = unique_input(doc, binding);
  std::string name = param_name;
  if (name.empty()) {
    const std::string* attr = input->attr("name");
    if (!attr || attr->empty())
      throw Error(Errc::input_has_no_name, "input '" + binding.input.expression + "' has no name attribute");
    name = *attr;
  }

  RequestTemplate t;
  t.response_kind = ResponseKind::full_document;
  const html::Node* form = enclosing_form(doc, *input);
  std::string action = doc.base_url();
  if (form) {
    const std::string* a = form->attr("action");
    if (a && !a->empty()) action = url::resolve(doc.base_url(), normalize_text(*a));
    const std::string* m = form->attr("method");
    if (m && lower(normalize_text(*m)) == "post") t.method = HttpMethod::post;
    collect_controls(*form, *input, name, t.static_params);
    if (std::none_of(t.static_params.begin(), t.static_params.end(),
                     [](const NameValue& p) { return p.second == "{query}"; }))
      t.static_params.emplace_back(name, "{query}");  // input tied by form= but outside the subtree
  } else {
    t.static_params.emplace_back(name, "{query}");
  }
  if (t.method == HttpMethod::get) action = url::split_query(action).first;
  t.url_template = action;
  return t;
}

HttpRequestPlan derive_form_request(const html::Document& doc, const EngineBinding& binding,
                                    std::string_view keywords) {
  return instantiate(form_template(doc, binding), doc.base_url(), keywords, 1);
}

HttpRequestPlan instantiate(const RequestTemplate& tmpl, std::string_view base, std::string_view keywords, int page) {
  HttpRequestPlan plan;
  plan.method = tmpl.method;
  std::string target = url::resolve(base, substitute(tmpl.url_template, url::form_encode(keywords), page));
  if (tmpl.method == HttpMethod::get) {
    auto [u, params] = url::split_query(target);
    plan.url = std::move(u);
    plan.params = std::move(params);
    plan.body_encoding = BodyEncoding::none;
  } else {
    plan.url = std::move(target);
    plan.body_encoding = BodyEncoding::form_urlencoded;
  }
  for (const auto& [n, v] : tmpl.static_params) plan.params.emplace_back(n, substitute(v, keywords, page));
  return plan;
}

void apply_modifier(HttpRequestPlan& plan, const RequestModifier& modifier, std::string_view base,
                    std::string_view keywords, int page) {
  if (const auto* set = std::get_if<ParamSet>(&modifier)) {
    for (const auto& [n, raw] : set->params) {
      std::string v = substitute(raw, keywords, page);
      auto it = std::find_if(plan.params.begin(), plan.params.end(), [&](const NameValue& p) { return p.first == n; });
      if (it == plan.params.end()) {
        plan.params.emplace_back(n, v);
        continue;
      }
      it->second = v;
      plan.params.erase(std::remove_if(std::next(it), plan.params.end(), [&](const NameValue& p) { return p.first == n; }),
                        plan.params.end());
    }
  } else if (const auto* o = std::get_if<UrlOverride>(&modifier)) {
    std::string target = url::resolve(base, substitute(o->url_template, url::form_encode(keywords), page));
    plan.params.clear();
    if (plan.method == HttpMethod::get) {
      auto [u, params] = url::split_query(target);
      plan.url = std::move(u);
      plan.params = std::move(params);
    } else {
      plan.url = std::move(target);
    }
  } else {
    const auto& suffix = std::get<PathSuffix>(modifier).suffix;
    url::Url u = url::parse(plan.url);
    if (!u.path.empty() && u.path.back() == '/' && !suffix.empty() && suffix.front() == '/')
      u.path += suffix.substr(1);
    else if ((u.path.empty() || u.path.back() != '/') && !suffix.empty() && suffix.front() != '/')
      u.path += "/" + suffix;
    else
      u.path += suffix;
    plan.url = u.str();
  }
}

HttpRequestPlan plan_request(const ServiceSpec& spec, const SearchQuery& query, Fetcher& fetcher) {
  check_query(spec, query);
  if (spec.strategy->variant == StrategyVariant::api_based)
    throw Error(Errc::invalid_argument, "api_based service '" + spec.id + "' builds its requests in provider '" +
                                            spec.strategy->provider_id + "'");
  return build_plan(spec, query, effective_template(spec, fetcher));
}

SearchOutcome execute(const ServiceSpec& spec, const SearchQuery& query, Fetcher& fetcher, const EngineOptions& options) {
  return run(std::make_shared<const ServiceSpec>(spec), query, fetcher, options);
}

SearchOutcome next_page(const PageCursor& cursor, Fetcher& fetcher, const EngineOptions& options) {
  if (!cursor.has_next || !cursor.spec)
    throw Error(Errc::no_such_page, "no page after " + std::to_string(cursor.page_index));
  SearchQuery query = cursor.query;
  query.page = cursor.page_index + 1;
  if (cursor.next_request) {
    FetchResponse res = fetch_ok(fetcher, *cursor.next_request);
    return finish(cursor.spec, query, res, *cursor.next_request, false, fetcher, options);
  }
  return run(cursor.spec, query, fetcher, options);
}

SearchOutcome prev_page(const PageCursor& cursor, Fetcher& fetcher, const EngineOptions& options) {
  if (cursor.page_index <= 1 || !cursor.spec)
    throw Error(Errc::no_such_page, "no page before " + std::to_string(cursor.page_index));
  SearchQuery query = cursor.query;
  query.page = cursor.page_index - 1;
  if (cursor.prev_request) {
    FetchResponse res = fetch_ok(fetcher, *cursor.prev_request);
    return finish(cursor.spec, query, res, *cursor.prev_request, false, fetcher, options);
  }
  return run(cursor.spec, query, fetcher, options);
}

void apply_local_ordering(std::vector<DomainObject>& items, const LocalOrdering& ordering) {
  std::stable_sort(items.begin(), items.end(), [&](const DomainObject& a, const DomainObject& b) {
    const PropertyValue& va = a.value(ordering.property);
    const PropertyValue& vb = b.value(ordering.property);
    if (va.is_missing() || vb.is_missing()) return !va.is_missing() && vb.is_missing();
    int c = compare_values(va, vb, ordering.comparator);
    return ordering.direction == SortDirection::asc ? c < 0 : c > 0;
  });
}

StrategyConfig detect_strategy(const ServiceSpec& draft, std::string_view probe_a, std::string_view probe_b,
                               Fetcher& fetcher) {
  if (probe_a == probe_b) throw Error(Errc::invalid_argument, "the two probes must differ");
  html::Document page = fetch_document(fetcher, draft.binding.search_page_url);

  std::vector<std::string> reasons;
  EngineOptions quiet;
  quiet.clock = [] { return std::string(); };

  auto accept = [&](const StrategyConfig& config) {
    std::string label(to_string(config.variant));
    ServiceSpec trial = draft;
    trial.strategy = config;
    auto targets = [&](std::string_view probe) {
      SearchQuery q;
      q.keywords = std::string(probe);
      auto outcome = execute(trial, q, fetcher, quiet);
      std::vector<std::string> urls;
      for (const auto& item : outcome.results.items) urls.push_back(item.target_url);
      std::sort(urls.begin(), urls.end());
      return urls;
    };
    try {
      auto a = targets(probe_a);
      auto b = targets(probe_b);
      if (a.empty() || b.empty()) {
        reasons.push_back(label + ": probe '" + std::string(a.empty() ? probe_a : probe_b) + "' returned no results");
        return false;
      }
      if (a == b) {
        reasons.push_back(label + ": both probes returned the same results");
        return false;
      }
      return true;
    } catch (const Error& e) {
      reasons.push_back(label + ": " + std::string(e.name()) + ": " + e.what());
      return false;
    }
  };

  const html::Node* input = nullptr;
  try {
    input = unique_input(page, draft.binding);
  } catch (const Error& e) {
    throw Error(Errc::no_applicable_strategy, std::string(e.name()) + ": " + e.what());
  }
  const html::Node* trigger = nullptr;
  if (draft.binding.trigger) {
    auto found = evaluate(*draft.binding.trigger, page);
    if (!found.empty()) trigger = found.front();
  }
  const html::Node* form = enclosing_form(page, *input);
  std::string input_name = input->attr("name") && !input->attr("name")->empty() ? *input->attr("name") : "q";

  // 1. Form submission.
  if (!trigger) {
    reasons.push_back("write_and_click_to_reload: no trigger element");
  } else {
    std::vector<std::string> names{""};
    if (!input->attr("name") || input->attr("name")->empty()) names = {"q", "query", "search", "s"};
    for (const auto& name : names) {
      StrategyConfig config;
      config.variant = StrategyVariant::write_and_click_to_reload;
      try {
        config.request_template = form_template(page, draft.binding, name);
      } catch (const Error& e) {
        reasons.push_back("write_and_click_to_reload: " + std::string(e.name()) + ": " + e.what());
        break;
      }
      if (accept(config)) return config;
    }
  }

  std::optional<RequestTemplate> recorded;
  if (draft.strategy && draft.strategy->request_template) recorded = draft.strategy->request_template;

  auto try_ajax = [&](StrategyVariant variant, std::vector<const html::Node*> hint_sources) -> std::optional<StrategyConfig> {
    std::string label(to_string(variant));
    std::optional<RequestTemplate> tmpl = recorded ? recorded : hinted_template(page, hint_sources, input_name);
    if (!tmpl) {
      reasons.push_back(label + ": no endpoint recorded or advertised in the markup");
      return std::nullopt;
    }
    StrategyConfig config;
    config.variant = variant;
    config.request_template = *tmpl;
    try {
      ServiceSpec trial = draft;
      trial.strategy = config;
      SearchQuery q;
      q.keywords = std::string(probe_a);
      FetchResponse res = fetcher.fetch(build_plan(trial, q, *tmpl));
      config.request_template->response_kind = sniff(res.body);
    } catch (const Error&) {
    }
    if (accept(config)) return config;
    return std::nullopt;
  };

  // 2. Click-triggered asynchronous request.
  if (!trigger) {
    reasons.push_back("write_and_click_for_ajax_call: no trigger element");
  } else if (auto config = try_ajax(StrategyVariant::write_and_click_for_ajax_call, {trigger, input, form})) {
    return *config;
  }

  // 3. Keystroke-triggered asynchronous request.
  if (auto config = try_ajax(StrategyVariant::write_for_ajax_call, {input, form})) return *config;

  std::string message = "no strategy retrieves distinct results for the probes";
  for (const auto& r : reasons) message += "; " + r;
  throw Error(Errc::no_applicable_strategy, message);
}

}  // namespace svc
