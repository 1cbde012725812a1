#include "svc/serialize.hpp"

#include <algorithm>
#include <set>

#include "svc/error.hpp"
#include "svc/validate.hpp"

namespace svc {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw Error(Errc::parse_error, path + ": " + message);
}

std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

const json& object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  return j;
}

void only_keys(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      fail(join(path, it.key()), "unknown field");
  }
}

const json& field(const json& j, std::string_view key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) fail(join(path, key), "missing field");
  return *it;
}

const json* optional_field(const json& j, std::string_view key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return nullptr;
  return &*it;
}

std::string string_of(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

std::string string_field(const json& j, std::string_view key, const std::string& path) {
  return string_of(field(j, key, path), join(path, key));
}

bool bool_field(const json& j, std::string_view key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_boolean()) fail(join(path, key), "expected a boolean");
  return v.get<bool>();
}

const json& array_field(const json& j, std::string_view key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_array()) fail(join(path, key), "expected an array");
  return v;
}

std::string index_path(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

template <typename Enum, std::size_t N>
Enum enum_of(const json& j, const std::string& path, const Enum (&values)[N]) {
  std::string s = string_of(j, path);
  for (Enum v : values)
    if (to_string(v) == s) return v;
  std::string allowed;
  for (Enum v : values) allowed += (allowed.empty() ? "" : ", ") + std::string(to_string(v));
  fail(path, "unknown value '" + s + "' (expected one of " + allowed + ")");
}

std::vector<NameValue> pairs_of(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of [name, value] pairs");
  std::vector<NameValue> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& p = j[i];
    if (!p.is_array() || p.size() != 2) fail(index_path(path, i), "expected a [name, value] pair");
    out.emplace_back(string_of(p[0], index_path(path, i) + "[0]"),
                     string_of(p[1], index_path(path, i) + "[1]"));
  }
  return out;
}

json pairs_json(const std::vector<NameValue>& pairs) {
  json out = json::array();
  for (const auto& [n, v] : pairs) out.push_back(json::array({n, v}));
  return out;
}

json extract_json(const ExtractRule& e) {
  switch (e.kind) {
    case ExtractRule::Kind::text: return {{"kind", "text"}};
    case ExtractRule::Kind::attribute: return {{"kind", "attribute"}, {"name", e.attribute}};
    case ExtractRule::Kind::inner_html: return {{"kind", "inner_html"}};
  }
  return {};
}

ExtractRule extract_from(const json& j, const std::string& path) {
  object(j, path);
  std::string kind = string_field(j, "kind", path);
  if (kind == "text") {
    only_keys(j, path, {"kind"});
    return ExtractRule::text();
  }
  if (kind == "inner_html") {
    only_keys(j, path, {"kind"});
    return ExtractRule::inner_html();
  }
  if (kind == "attribute") {
    only_keys(j, path, {"kind", "name"});
    return ExtractRule::attr(string_field(j, "name", path));
  }
  fail(join(path, "kind"), "unknown extraction '" + kind + "' (expected text, attribute or inner_html)");
}

PropertySpec property_from(const json& j, const std::string& path) {
  object(j, path);
  only_keys(j, path, {"name", "location", "selector", "extract"});
  PropertySpec p;
  p.name = string_field(j, "name", path);
  static const PropertyLocation locs[] = {PropertyLocation::in_result, PropertyLocation::in_target};
  p.location = enum_of(field(j, "location", path), join(path, "location"), locs);
  p.selector = selector_from_json(field(j, "selector", path), join(path, "selector"));
  p.extract = extract_from(field(j, "extract", path), join(path, "extract"));
  return p;
}

RequestModifier modifier_from(const json& j, const std::string& path) {
  object(j, path);
  if (j.size() != 1) fail(path, "expected exactly one of url_override, param_set, path_suffix");
  auto it = j.begin();
  if (it.key() == "url_override") return UrlOverride{string_of(*it, join(path, "url_override"))};
  if (it.key() == "param_set") return ParamSet{pairs_of(*it, join(path, "param_set"))};
  if (it.key() == "path_suffix") return PathSuffix{string_of(*it, join(path, "path_suffix"))};
  fail(join(path, it.key()), "unknown modifier");
}

RequestTemplate template_from(const json& j, const std::string& path) {
  object(j, path);
  only_keys(j, path, {"method", "url_template", "static_params", "response_kind"});
  RequestTemplate t;
  static const HttpMethod methods[] = {HttpMethod::get, HttpMethod::post};
  static const ResponseKind kinds[] = {ResponseKind::full_document, ResponseKind::html_fragment};
  t.method = enum_of(field(j, "method", path), join(path, "method"), methods);
  t.url_template = string_field(j, "url_template", path);
  t.static_params = pairs_of(field(j, "static_params", path), join(path, "static_params"));
  t.response_kind = enum_of(field(j, "response_kind", path), join(path, "response_kind"), kinds);
  return t;
}

OrderingSpec ordering_from(const json& j, const std::string& path) {
  object(j, path);
  only_keys(j, path, {"name", "mode"});
  OrderingSpec o;
  o.name = string_field(j, "name", path);
  const json& mode = object(field(j, "mode", path), join(path, "mode"));
  std::string mpath = join(path, "mode");
  if (mode.size() != 1) fail(mpath, "expected exactly one of remote, local");
  if (const json* r = optional_field(mode, "remote")) {
    o.mode = RemoteOrdering{modifier_from(*r, join(mpath, "remote"))};
  } else if (const json* l = optional_field(mode, "local")) {
    std::string lpath = join(mpath, "local");
    object(*l, lpath);
    only_keys(*l, lpath, {"property", "direction", "comparator"});
    static const SortDirection dirs[] = {SortDirection::asc, SortDirection::desc};
    static const SortComparator cmps[] = {SortComparator::lexical, SortComparator::numeric,
                                          SortComparator::date};
    LocalOrdering local;
    local.property = string_field(*l, "property", lpath);
    local.direction = enum_of(field(*l, "direction", lpath), join(lpath, "direction"), dirs);
    local.comparator = enum_of(field(*l, "comparator", lpath), join(lpath, "comparator"), cmps);
    o.mode = local;
  } else {
    fail(join(mpath, mode.begin().key()), "unknown ordering mode");
  }
  return o;
}

void check_version(const json& j, const std::string& path) {
  if (!j.is_object()) return;
  auto it = j.find("format_version");
  if (it != j.end() && it->is_string() && it->get<std::string>() != kFormatVersion)
    throw Error(Errc::version_mismatch, path + ": format_version '" + it->get<std::string>() +
                                            "' is not supported (expected '" +
                                            std::string(kFormatVersion) + "')");
}

}  // namespace

json to_json(const Selector& s) {
  return {{"kind", to_string(s.kind)}, {"expression", s.expression}, {"expect_many", s.expect_many}};
}

json to_json(const PropertySpec& p) {
  return {{"name", p.name},
          {"location", to_string(p.location)},
          {"selector", to_json(p.selector)},
          {"extract", extract_json(p.extract)}};
}

json to_json(const RequestModifier& m) {
  if (const auto* o = std::get_if<UrlOverride>(&m)) return {{"url_override", o->url_template}};
  if (const auto* p = std::get_if<ParamSet>(&m)) return {{"param_set", pairs_json(p->params)}};
  return {{"path_suffix", std::get<PathSuffix>(m).suffix}};
}

json to_json(const StrategyConfig& s) {
  json j = {{"variant", to_string(s.variant)}};
  if (!s.provider_id.empty()) j["provider_id"] = s.provider_id;
  if (s.request_template) {
    const auto& t = *s.request_template;
    j["request_template"] = {{"method", to_string(t.method)},
                             {"url_template", t.url_template},
                             {"static_params", pairs_json(t.static_params)},
                             {"response_kind", to_string(t.response_kind)}};
  }
  return j;
}

json to_json(const SearchQuery& q) {
  json j = {{"keywords", q.keywords}, {"filters", q.active_filters}, {"page", q.page}};
  if (q.active_ordering) j["ordering"] = *q.active_ordering;
  return j;
}

json to_json(const ServiceSpec& spec) {
  json binding = {{"search_page_url", spec.binding.search_page_url}, {"input", to_json(spec.binding.input)}};
  if (spec.binding.trigger) binding["trigger"] = to_json(*spec.binding.trigger);
  if (spec.binding.next_page) binding["next_page"] = to_json(*spec.binding.next_page);
  if (spec.binding.prev_page) binding["prev_page"] = to_json(*spec.binding.prev_page);
  if (spec.binding.reveal) binding["reveal"] = to_json(*spec.binding.reveal);

  json result = {{"type_name", spec.result_spec.type_name},
                 {"container", to_json(spec.result_spec.container)},
                 {"properties", json::array()}};
  if (spec.result_spec.target_url) result["target_url"] = to_json(*spec.result_spec.target_url);
  for (const auto& p : spec.result_spec.properties) result["properties"].push_back(to_json(p));

  json groups = json::array();
  for (const auto& g : spec.filters.groups) {
    json conds = json::array();
    for (const auto& c : g.conditions) conds.push_back({{"name", c.name}, {"activation", to_json(c.activation)}});
    groups.push_back({{"group_name", g.group_name}, {"exclusive", g.exclusive}, {"conditions", conds}});
  }

  json orderings = json::array();
  for (const auto& o : spec.orderings) {
    json mode;
    if (const auto* r = std::get_if<RemoteOrdering>(&o.mode)) {
      mode = {{"remote", to_json(r->modifier)}};
    } else {
      const auto& l = std::get<LocalOrdering>(o.mode);
      mode = {{"local",
               {{"property", l.property},
                {"direction", to_string(l.direction)},
                {"comparator", to_string(l.comparator)}}}};
    }
    orderings.push_back({{"name", o.name}, {"mode", mode}});
  }

  json j = {{"id", spec.id},
            {"name", spec.name},
            {"binding", binding},
            {"result_spec", result},
            {"filters", {{"groups", groups}}},
            {"orderings", orderings},
            {"metadata",
             {{"tags", spec.metadata.tags},
              {"created", spec.metadata.created},
              {"format_version", spec.metadata.format_version}}}};
  if (spec.strategy) j["strategy"] = to_json(*spec.strategy);
  return j;
}

Selector selector_from_json(const json& j, const std::string& path) {
  object(j, path);
  only_keys(j, path, {"kind", "expression", "expect_many"});
  Selector s;
  static const SelectorKind kinds[] = {SelectorKind::css, SelectorKind::xpath};
  s.kind = enum_of(field(j, "kind", path), join(path, "kind"), kinds);
  s.expression = string_field(j, "expression", path);
  s.expect_many = j.contains("expect_many") ? bool_field(j, "expect_many", path) : false;
  return s;
}

StrategyConfig strategy_from_json(const json& j, const std::string& path) {
  object(j, path);
  only_keys(j, path, {"variant", "provider_id", "request_template"});
  StrategyConfig s;
  static const StrategyVariant variants[] = {
      StrategyVariant::write_and_click_to_reload, StrategyVariant::write_and_click_for_ajax_call,
      StrategyVariant::write_for_ajax_call, StrategyVariant::api_based};
  s.variant = enum_of(field(j, "variant", path), join(path, "variant"), variants);
  if (const json* p = optional_field(j, "provider_id")) s.provider_id = string_of(*p, join(path, "provider_id"));
  if (const json* t = optional_field(j, "request_template"))
    s.request_template = template_from(*t, join(path, "request_template"));
  return s;
}

SearchQuery query_from_json(const json& j, const std::string& path) {
  object(j, path);
  only_keys(j, path, {"keywords", "filters", "ordering", "page"});
  SearchQuery q;
  if (const json* k = optional_field(j, "keywords")) q.keywords = string_of(*k, join(path, "keywords"));
  if (const json* f = optional_field(j, "filters")) {
    if (!f->is_array()) fail(join(path, "filters"), "expected an array");
    for (std::size_t i = 0; i < f->size(); ++i)
      q.active_filters.push_back(string_of((*f)[i], index_path(join(path, "filters"), i)));
  }
  if (const json* o = optional_field(j, "ordering")) q.active_ordering = string_of(*o, join(path, "ordering"));
  if (const json* p = optional_field(j, "page")) {
    if (!p->is_number_integer()) fail(join(path, "page"), "expected an integer");
    q.page = p->get<int>();
  }
  return q;
}

ServiceSpec spec_from_json(const json& j) {
  object(j, "");
  if (const json* m = optional_field(j, "metadata")) check_version(*m, "metadata");
  only_keys(j, "", {"id", "name", "binding", "strategy", "result_spec", "filters", "orderings", "metadata"});
  ServiceSpec spec;
  spec.id = string_field(j, "id", "");
  spec.name = string_field(j, "name", "");

  const json& b = object(field(j, "binding", ""), "binding");
  only_keys(b, "binding", {"search_page_url", "input", "trigger", "next_page", "prev_page", "reveal"});
  spec.binding.search_page_url = string_field(b, "search_page_url", "binding");
  spec.binding.input = selector_from_json(field(b, "input", "binding"), "binding.input");
  if (const json* s = optional_field(b, "trigger")) spec.binding.trigger = selector_from_json(*s, "binding.trigger");
  if (const json* s = optional_field(b, "next_page"))
    spec.binding.next_page = selector_from_json(*s, "binding.next_page");
  if (const json* s = optional_field(b, "prev_page"))
    spec.binding.prev_page = selector_from_json(*s, "binding.prev_page");
  if (const json* s = optional_field(b, "reveal")) spec.binding.reveal = selector_from_json(*s, "binding.reveal");

  if (const json* s = optional_field(j, "strategy")) spec.strategy = strategy_from_json(*s, "strategy");

  const json& r = object(field(j, "result_spec", ""), "result_spec");
  only_keys(r, "result_spec", {"type_name", "container", "target_url", "properties"});
  spec.result_spec.type_name = string_field(r, "type_name", "result_spec");
  spec.result_spec.container = selector_from_json(field(r, "container", "result_spec"), "result_spec.container");
  if (const json* t = optional_field(r, "target_url"))
    spec.result_spec.target_url = property_from(*t, "result_spec.target_url");
  const json& props = array_field(r, "properties", "result_spec");
  for (std::size_t i = 0; i < props.size(); ++i)
    spec.result_spec.properties.push_back(property_from(props[i], index_path("result_spec.properties", i)));

  const json& f = object(field(j, "filters", ""), "filters");
  only_keys(f, "filters", {"groups"});
  const json& groups = array_field(f, "groups", "filters");
  for (std::size_t g = 0; g < groups.size(); ++g) {
    std::string gpath = index_path("filters.groups", g);
    const json& gj = object(groups[g], gpath);
    only_keys(gj, gpath, {"group_name", "exclusive", "conditions"});
    ConditionGroup group;
    group.group_name = string_field(gj, "group_name", gpath);
    group.exclusive = bool_field(gj, "exclusive", gpath);
    const json& conds = array_field(gj, "conditions", gpath);
    for (std::size_t i = 0; i < conds.size(); ++i) {
      std::string cpath = index_path(gpath + ".conditions", i);
      const json& cj = object(conds[i], cpath);
      only_keys(cj, cpath, {"name", "activation"});
      group.conditions.push_back(
          {string_field(cj, "name", cpath), modifier_from(field(cj, "activation", cpath), join(cpath, "activation"))});
    }
    spec.filters.groups.push_back(std::move(group));
  }

  const json& orderings = array_field(j, "orderings", "");
  for (std::size_t i = 0; i < orderings.size(); ++i)
    spec.orderings.push_back(ordering_from(orderings[i], index_path("orderings", i)));

  const json& m = object(field(j, "metadata", ""), "metadata");
  only_keys(m, "metadata", {"tags", "created", "format_version"});
  const json& tags = array_field(m, "tags", "metadata");
  for (std::size_t i = 0; i < tags.size(); ++i)
    spec.metadata.tags.push_back(string_of(tags[i], index_path("metadata.tags", i)));
  spec.metadata.created = string_field(m, "created", "metadata");
  spec.metadata.format_version = string_field(m, "format_version", "metadata");
  return spec;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t offset = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < offset; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw Error(Errc::parse_error, "invalid JSON at line " + std::to_string(line) + ", column " +
                                       std::to_string(column));
  }
}

std::string dump_canonical(const json& j) { return j.dump(2) + "\n"; }

std::string serialize(const ServiceSpec& spec) { return dump_canonical(to_json(spec)); }

ServiceSpec deserialize(std::string_view text) { return spec_from_json(parse_json(text)); }

std::string export_bundle(const std::vector<ServiceSpec>& specs) {
  json services = json::array();
  for (const auto& s : specs) services.push_back(to_json(s));
  return dump_canonical({{"format_version", kFormatVersion}, {"services", services}});
}

ImportResult import_bundle(std::string_view text, const std::function<bool(const std::string&)>& id_taken) {
  json doc = parse_json(text);
  if (!doc.is_object()) throw Error(Errc::parse_error, "bundle: expected an object");
  check_version(doc, "bundle");

  std::vector<const json*> entries;
  if (doc.contains("services")) {
    only_keys(doc, "bundle", {"format_version", "services"});
    const json& services = doc["services"];
    if (!services.is_array()) throw Error(Errc::parse_error, "bundle.services: expected an array");
    for (const auto& s : services) entries.push_back(&s);
  } else {
    entries.push_back(&doc);  // a bare spec document
  }

  ImportResult result;
  std::set<std::string> assigned;
  auto taken = [&](const std::string& id) { return assigned.count(id) > 0 || (id_taken && id_taken(id)); };

  for (std::size_t i = 0; i < entries.size(); ++i) {
    const json& entry = *entries[i];
    RejectedEntry rejected;
    rejected.index = i;
    if (entry.is_object() && entry.contains("id") && entry["id"].is_string())
      rejected.id = entry["id"].get<std::string>();

    ServiceSpec spec;
    try {
      spec = spec_from_json(entry);
    } catch (const Error& e) {
      rejected.reasons.push_back(std::string(e.name()) + ": " + e.what());
      result.rejected.push_back(std::move(rejected));
      continue;
    }
    auto report = validate_spec(spec);
    if (!report.ok()) {
      for (const auto& p : report.errors()) rejected.reasons.push_back(p.path + ": " + p.message);
      result.rejected.push_back(std::move(rejected));
      continue;
    }
    if (taken(spec.id)) {
      std::string original = spec.id;
      int n = 2;
      while (taken(original + "-" + std::to_string(n))) ++n;
      spec.id = original + "-" + std::to_string(n);
      spec.name += " (imported)";
      result.renamed.emplace_back(original, spec.id);
    }
    assigned.insert(spec.id);
    result.imported.push_back(std::move(spec));
  }
  return result;
}

}  // namespace svc
