#include "svc/visualizers.hpp"

#include <algorithm>
#include <mutex>

#include "svc/error.hpp"

namespace svc {

using nlohmann::json;

namespace {

std::vector<std::string> column_order(const ResultSet& rs, const RenderContext& ctx) {
  std::vector<std::string> names = ctx.property_names;
  for (const auto& item : rs.items)
    for (const auto& [k, v] : item.values)
      if (std::find(names.begin(), names.end(), k) == names.end()) names.push_back(k);
  return names;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    std::string part = text.substr(start, comma - start);
    auto b = part.find_first_not_of(" \t");
    auto e = part.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(part.substr(b, e - b + 1));
    start = comma + 1;
  }
  return out;
}

PresentationModel render_table(const ResultSet& rs, const json& options, const RenderContext& ctx) {
  std::vector<std::string> names = column_order(rs, ctx);
  std::vector<std::string> ordered;
  for (const auto& c : split_list(options.at("columns").get<std::string>())) {
    if (std::find(names.begin(), names.end(), c) == names.end())
      throw Error(Errc::invalid_option, "columns: unknown property '" + c + "'");
    if (std::find(ordered.begin(), ordered.end(), c) == ordered.end()) ordered.push_back(c);
  }
  for (const auto& n : names)
    if (std::find(ordered.begin(), ordered.end(), n) == ordered.end()) ordered.push_back(n);

  auto limit = options.at("display_limit").get<long long>();
  std::size_t shown = limit > 0 ? std::min<std::size_t>(static_cast<std::size_t>(limit), ordered.size()) : ordered.size();

  TableModel t;
  t.columns.assign(ordered.begin(), ordered.begin() + static_cast<std::ptrdiff_t>(shown));
  for (const auto& item : rs.items) {
    std::vector<PropertyValue> row;
    for (std::size_t i = 0; i < shown; ++i) row.push_back(item.value(ordered[i]));
    std::map<std::string, PropertyValue> extra;
    for (std::size_t i = shown; i < ordered.size(); ++i) extra[ordered[i]] = item.value(ordered[i]);
    t.rows.push_back(std::move(row));
    t.overflow.push_back(std::move(extra));
    t.target_urls.push_back(item.target_url);
  }
  return t;
}

PresentationModel render_grouped(const ResultSet& rs, const json& options, const RenderContext&) {
  GroupedModel g;
  g.group_property = options.at("property").get<std::string>();
  for (const auto& item : rs.items) {
    const PropertyValue& v = item.value(g.group_property);
    if (v.is_missing()) {
      g.missing_group.push_back(item);
      continue;
    }
    auto it = std::find_if(g.groups.begin(), g.groups.end(), [&](const auto& grp) { return grp.first == v.value; });
    if (it == g.groups.end()) g.groups.emplace_back(v.value, std::vector<DomainObject>{item});
    else it->second.push_back(item);
  }
  return g;
}

PresentationModel render_aggregate(const ResultSet& rs, const json& options, const RenderContext&) {
  AggregateModel a;
  a.dimension = options.at("property").get<std::string>();
  for (const auto& item : rs.items) {
    const PropertyValue& v = item.value(a.dimension);
    if (v.is_missing()) continue;
    auto it = std::find_if(a.counts.begin(), a.counts.end(), [&](const auto& c) { return c.first == v.value; });
    if (it == a.counts.end()) a.counts.emplace_back(v.value, 1);
    else ++it->second;
  }
  return a;
}

json check_options(const VisualizerDescriptor& d, const json& given, const std::vector<std::string>& known) {
  if (!given.is_null() && !given.is_object()) throw Error(Errc::invalid_option, "options must be an object");
  json out = json::object();
  if (given.is_object()) {
    for (auto it = given.begin(); it != given.end(); ++it) {
      bool declared = std::any_of(d.options_schema.begin(), d.options_schema.end(),
                                  [&](const OptionSchema& o) { return o.option_name == it.key(); });
      if (!declared) throw Error(Errc::invalid_option, d.id + ": unknown option '" + it.key() + "'");
    }
  }
  for (const auto& o : d.options_schema) {
    json v = given.is_object() && given.contains(o.option_name) ? given[o.option_name] : o.default_value;
    if (v.is_null()) {
      if (o.required) throw Error(Errc::invalid_option, d.id + ": option '" + o.option_name + "' is required");
      continue;
    }
    std::string where = d.id + ": option '" + o.option_name + "'";
    switch (o.type) {
      case OptionType::string:
        if (!v.is_string()) throw Error(Errc::invalid_option, where + " must be a string");
        break;
      case OptionType::property_ref:
        if (!v.is_string()) throw Error(Errc::invalid_option, where + " must name a property");
        if (!known.empty() && std::find(known.begin(), known.end(), v.get<std::string>()) == known.end())
          throw Error(Errc::invalid_option, where + ": unknown property '" + v.get<std::string>() + "'");
        break;
      case OptionType::enumeration:
        if (!v.is_string() || std::find(o.choices.begin(), o.choices.end(), v.get<std::string>()) == o.choices.end())
          throw Error(Errc::invalid_option, where + " must be one of the declared choices");
        break;
      case OptionType::integer:
        if (!v.is_number_integer() || v.get<long long>() < 0)
          throw Error(Errc::invalid_option, where + " must be a non-negative integer");
        break;
    }
    out[o.option_name] = v;
  }
  return out;
}

json values_json(const std::map<std::string, PropertyValue>& values) {
  json out = json::object();
  for (const auto& [k, v] : values) out[k] = to_json(v);
  return out;
}

}  // namespace

std::string_view to_string(OptionType t) {
  switch (t) {
    case OptionType::string: return "string";
    case OptionType::property_ref: return "property_ref";
    case OptionType::enumeration: return "enum";
    case OptionType::integer: return "integer";
  }
  return "string";
}

VisualizerRegistry::VisualizerRegistry() {
  register_visualizer({std::string(kDefaultVisualizer),
                       "Table of properties",
                       {{"columns", OptionType::string, "", {}, false},
                        {"display_limit", OptionType::integer, 0, {}, false}}},
                      render_table);
  register_visualizer({"group_by_property_value",
                       "Group by property value",
                       {{"property", OptionType::property_ref, nullptr, {}, true}}},
                      render_grouped);
  register_visualizer({"aggregate_count",
                       "Count per property value",
                       {{"property", OptionType::property_ref, nullptr, {}, true}}},
                      render_aggregate);
}

void VisualizerRegistry::register_visualizer(VisualizerDescriptor descriptor, RenderFunction render) {
  std::unique_lock lock(mutex_);
  if (descriptor.id.empty()) throw Error(Errc::invalid_argument, "visualizer id is empty");
  if (!render) throw Error(Errc::invalid_argument, "visualizer '" + descriptor.id + "' has no render function");
  for (const auto& e : entries_)
    if (e.descriptor.id == descriptor.id)
      throw Error(Errc::duplicate_id, "visualizer '" + descriptor.id + "' is already registered");
  entries_.push_back({std::move(descriptor), std::move(render)});
}

std::vector<VisualizerDescriptor> VisualizerRegistry::list() const {
  std::shared_lock lock(mutex_);
  std::vector<VisualizerDescriptor> out;
  for (const auto& e : entries_) out.push_back(e.descriptor);
  return out;
}

std::optional<VisualizerDescriptor> VisualizerRegistry::find(const std::string& id) const {
  std::shared_lock lock(mutex_);
  for (const auto& e : entries_)
    if (e.descriptor.id == id) return e.descriptor;
  return std::nullopt;
}

PresentationModel VisualizerRegistry::render(const ResultSet& results, const std::string& id, const json& options,
                                             const RenderContext& context) const {
  std::string wanted = id.empty() ? std::string(kDefaultVisualizer) : id;
  Entry entry;
  {
    std::shared_lock lock(mutex_);
    auto it = std::find_if(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.descriptor.id == wanted; });
    if (it == entries_.end()) throw Error(Errc::unknown_visualizer, "no visualizer '" + wanted + "'");
    entry = *it;
  }
  json checked = check_options(entry.descriptor, options, context.property_names);
  return entry.render(results, checked, context);
}

VisualizerRegistry& VisualizerRegistry::global() {
  static VisualizerRegistry registry;
  return registry;
}

json to_json(const VisualizerDescriptor& d) {
  json schema = json::array();
  for (const auto& o : d.options_schema) {
    json entry = {{"option_name", o.option_name}, {"type", to_string(o.type)}, {"default", o.default_value},
                  {"required", o.required}};
    if (o.type == OptionType::enumeration) entry["choices"] = o.choices;
    schema.push_back(entry);
  }
  return {{"id", d.id}, {"display_name", d.display_name}, {"options_schema", schema}};
}

json to_json(const PresentationModel& model) {
  if (const auto* t = std::get_if<TableModel>(&model)) {
    json rows = json::array();
    for (const auto& r : t->rows) {
      json row = json::array();
      for (const auto& cell : r) row.push_back(to_json(cell));
      rows.push_back(row);
    }
    json overflow = json::array();
    for (const auto& o : t->overflow) overflow.push_back(values_json(o));
    return {{"kind", "table"}, {"columns", t->columns}, {"rows", rows}, {"overflow", overflow},
            {"target_urls", t->target_urls}};
  }
  if (const auto* g = std::get_if<GroupedModel>(&model)) {
    json groups = json::array();
    for (const auto& [value, items] : g->groups) {
      json list = json::array();
      for (const auto& i : items) list.push_back(to_json(i));
      groups.push_back({{"value", value}, {"items", list}});
    }
    json missing = json::array();
    for (const auto& i : g->missing_group) missing.push_back(to_json(i));
    return {{"kind", "grouped"}, {"group_property", g->group_property}, {"groups", groups}, {"missing_group", missing}};
  }
  if (const auto* a = std::get_if<AggregateModel>(&model)) {
    json counts = json::array();
    for (const auto& [value, n] : a->counts) counts.push_back({{"value", value}, {"count", n}});
    return {{"kind", "aggregate"}, {"dimension", a->dimension}, {"counts", counts}};
  }
  return {{"kind", "custom"}, {"data", std::get<CustomModel>(model).data}};
}

}  // namespace svc
