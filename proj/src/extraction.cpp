#include "svc/extraction.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "svc/error.hpp"
#include "svc/selector.hpp"
#include "svc/serialize.hpp"
#include "svc/url.hpp"

namespace svc {

namespace {

bool is_url_attribute(std::string_view name) {
  return name == "href" || name == "src" || name == "action" || name == "data-href" || name == "cite" ||
         name == "poster";
}

const PropertyValue kMissing{};

}  // namespace

const PropertyValue& DomainObject::value(const std::string& property) const {
  auto it = values.find(property);
  return it == values.end() ? kMissing : it->second;
}

std::string normalize_text(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(raw[i]);
    bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
    if (c == 0xC2 && i + 1 < raw.size() && static_cast<unsigned char>(raw[i + 1]) == 0xA0) {
      space = true;
      ++i;
    }
    if (space) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += static_cast<char>(c);
  }
  return out;
}

PropertyValue read_property(const PropertySpec& prop, const html::Node& scope, std::string_view base_url) {
  CompiledSelector sel(prop.selector);
  const html::Node* node = sel.first_in(scope);
  if (!node) return PropertyValue::missing();
  switch (prop.extract.kind) {
    case ExtractRule::Kind::text:
      return PropertyValue::text(normalize_text(html::text_content(*node)));
    case ExtractRule::Kind::inner_html:
      return PropertyValue::text(html::inner_html(*node));
    case ExtractRule::Kind::attribute: {
      const std::string* v = node->attr(prop.extract.attribute);
      if (!v) return PropertyValue::missing();
      if (is_url_attribute(prop.extract.attribute)) {
        std::string trimmed = normalize_text(*v);
        if (trimmed.empty()) return PropertyValue::missing();
        return PropertyValue::url(url::resolve(base_url, trimmed));
      }
      return PropertyValue::text(*v);
    }
  }
  return PropertyValue::missing();
}

ExtractionOutput extract_results(const html::Document& doc, const SearchResultSpec& spec,
                                 std::string_view base_url, std::string_view fetched_at) {
  ExtractionOutput out;
  if (!spec.target_url) throw Error(Errc::validation, "result spec has no target_url");
  std::string base = doc.base_url().empty() ? std::string(base_url) : doc.base_url();

  CompiledSelector container(spec.container);
  auto containers = container.select(doc);
  for (std::size_t i = 0; i < containers.size(); ++i) {
    const html::Node& c = *containers[i];
    PropertyValue target = read_property(*spec.target_url, c, base);
    if (target.is_missing() || !url::is_absolute_http(target.value)) {
      ++out.dropped;
      out.diagnostics.push_back("container " + std::to_string(i) + ": no target_url, dropped");
      continue;
    }
    DomainObject obj;
    obj.type_name = spec.type_name;
    obj.target_url = target.value;
    obj.provenance = {std::string(base_url), i, std::string(fetched_at)};
    for (const auto& prop : spec.properties) {
      obj.values[prop.name] =
          prop.location == PropertyLocation::in_result ? read_property(prop, c, base) : PropertyValue::missing();
    }
    out.objects.push_back(std::move(obj));
  }
  return out;
}

std::vector<DomainObject> enrich_in_target(std::vector<DomainObject> objects, const SearchResultSpec& spec,
                                           Fetcher& fetcher, std::vector<std::string>* diagnostics) {
  std::vector<const PropertySpec*> in_target;
  for (const auto& p : spec.properties)
    if (p.location == PropertyLocation::in_target) in_target.push_back(&p);
  if (in_target.empty() || objects.empty()) return objects;

  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    bool complete = std::all_of(in_target.begin(), in_target.end(),
                                [&](const PropertySpec* p) { return !objects[i].value(p->name).is_missing(); });
    if (!complete) todo.push_back(i);
  }

  std::vector<std::string> notes(objects.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < todo.size(); k = next++) {
      DomainObject& obj = objects[todo[k]];
      try {
        FetchResponse res = fetcher.fetch(get_plan(obj.target_url));
        if (!res.ok()) {
          notes[todo[k]] = obj.target_url + ": HTTP " + std::to_string(res.status);
          continue;
        }
        html::Document doc = html::Document::parse(res.body, res.final_url);
        for (const PropertySpec* p : in_target) {
          obj.values[p->name] = read_property(*p, doc.root(), doc.base_url());
        }
      } catch (const std::exception& e) {
        notes[todo[k]] = obj.target_url + ": " + e.what();
      }
    }
  };

  std::size_t workers = std::min<std::size_t>(todo.size(), std::max(1, fetcher.config().max_parallel));
  std::vector<std::thread> threads;
  for (std::size_t i = 1; i < workers; ++i) threads.emplace_back(work);
  work();
  for (auto& t : threads) t.join();

  if (diagnostics) {
    for (const auto& n : notes)
      if (!n.empty()) diagnostics->push_back("enrichment failed for " + n);
  }
  return objects;
}

nlohmann::json to_json(const PropertyValue& v) {
  if (v.is_missing()) return nullptr;
  return v.value;
}

nlohmann::json to_json(const DomainObject& o) {
  nlohmann::json values = nlohmann::json::object();
  for (const auto& [k, v] : o.values) values[k] = to_json(v);
  return {{"type", o.type_name},
          {"values", values},
          {"target_url", o.target_url},
          {"provenance",
           {{"source_url", o.provenance.source_url},
            {"container_index", o.provenance.container_index},
            {"fetched_at", o.provenance.fetched_at}}}};
}

nlohmann::json to_json(const ResultSet& rs) {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& o : rs.items) items.push_back(to_json(o));
  return {{"service_id", rs.service_id},
          {"query", to_json(rs.query)},
          {"items", items},
          {"page", {{"page", rs.page.page}, {"has_next", rs.page.has_next}, {"has_prev", rs.page.has_prev}}},
          {"dropped", rs.dropped},
          {"diagnostics", rs.diagnostics}};
}

}  // namespace svc
