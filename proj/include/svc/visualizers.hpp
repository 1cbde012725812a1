#pragma once

#include <functional>
#include <map>
#include <shared_mutex>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "svc/extraction.hpp"

namespace svc {

enum class OptionType { string, property_ref, enumeration, integer };
std::string_view to_string(OptionType t);

struct OptionSchema {
  std::string option_name;
  OptionType type = OptionType::string;
  nlohmann::json default_value;       // null = no default
  std::vector<std::string> choices;   // enumeration only
  bool required = false;
};

struct VisualizerDescriptor {
  std::string id;
  std::string display_name;
  std::vector<OptionSchema> options_schema;
};

struct TableModel {
  std::vector<std::string> columns;
  std::vector<std::vector<PropertyValue>> rows;
  std::vector<std::map<std::string, PropertyValue>> overflow;  // one map per row
  std::vector<std::string> target_urls;                        // one per row
};

struct GroupedModel {
  std::string group_property;
  std::vector<std::pair<std::string, std::vector<DomainObject>>> groups;  // first-appearance order
  std::vector<DomainObject> missing_group;
};

struct AggregateModel {
  std::string dimension;
  std::vector<std::pair<std::string, int>> counts;  // first-appearance order
};

struct CustomModel {
  nlohmann::json data;
};

using PresentationModel = std::variant<TableModel, GroupedModel, AggregateModel, CustomModel>;

/// What a renderer may know besides the items: the spec's property names in
/// declaration order (empty when unknown).
struct RenderContext {
  std::vector<std::string> property_names;
};

/// `options` arrive validated, with defaults filled in.
using RenderFunction =
    std::function<PresentationModel(const ResultSet&, const nlohmann::json& options, const RenderContext&)>;

inline constexpr std::string_view kDefaultVisualizer = "table_of_properties";

class VisualizerRegistry {
 public:
  /// Registry holding the three built-ins.
  VisualizerRegistry();

  /// Throws Error(Errc::duplicate_id).
  void register_visualizer(VisualizerDescriptor descriptor, RenderFunction render);
  std::vector<VisualizerDescriptor> list() const;
  std::optional<VisualizerDescriptor> find(const std::string& id) const;

  /// Empty id selects table_of_properties. Throws unknown-visualizer or
  /// invalid-option.
  PresentationModel render(const ResultSet& results, const std::string& id, const nlohmann::json& options,
                           const RenderContext& context = {}) const;

  static VisualizerRegistry& global();

 private:
  struct Entry {
    VisualizerDescriptor descriptor;
    RenderFunction render;
  };
  mutable std::shared_mutex mutex_;
  std::vector<Entry> entries_;  // registration order
};

nlohmann::json to_json(const VisualizerDescriptor& d);
nlohmann::json to_json(const PresentationModel& model);

}  // namespace svc
