#include <gtest/gtest.h>

#include "generators.hpp"
#include "svc/error.hpp"
#include "svc/visualizers.hpp"

using namespace svc;
using nlohmann::json;

namespace {

DomainObject item(const std::string& url, const std::string& venue, const std::string& rating) {
  DomainObject o;
  o.type_name = "Book";
  o.target_url = url;
  o.values["title"] = PropertyValue::text("T " + url);
  o.values["venue"] = venue.empty() ? PropertyValue::missing() : PropertyValue::text(venue);
  o.values["rating"] = PropertyValue::text(rating);
  return o;
}

ResultSet sample() {
  ResultSet rs;
  rs.service_id = "s";
  rs.items = {item("u1", "journal", "4.5"), item("u2", "conference", "4.0"), item("u3", "", "4.5"),
              item("u4", "journal", "3.0")};
  return rs;
}

const RenderContext kCtx{{"title", "venue", "rating"}};

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::invalid_argument;
}

}  // namespace

TEST(Visualizers, BuiltinsAreListed) {
  VisualizerRegistry reg;
  auto list = reg.list();
  ASSERT_EQ(list.size(), 3u);
  EXPECT_EQ(list[0].id, "table_of_properties");
  EXPECT_EQ(list[1].id, "group_by_property_value");
  EXPECT_EQ(list[2].id, "aggregate_count");
  EXPECT_EQ(to_json(list[1])["options_schema"][0]["type"], "property_ref");
}

TEST(Visualizers, TableKeepsEveryValue) {
  VisualizerRegistry reg;
  auto model = reg.render(sample(), "", json::object(), kCtx);
  auto& t = std::get<TableModel>(model);
  EXPECT_EQ(t.columns, (std::vector<std::string>{"title", "venue", "rating"}));
  ASSERT_EQ(t.rows.size(), 4u);
  EXPECT_TRUE(t.rows[2][1].is_missing());
  EXPECT_EQ(t.target_urls[3], "u4");
}

TEST(Visualizers, TableColumnsAndOverflow) {
  VisualizerRegistry reg;
  auto model = reg.render(sample(), "table_of_properties", {{"columns", "rating"}, {"display_limit", 1}}, kCtx);
  auto& t = std::get<TableModel>(model);
  EXPECT_EQ(t.columns, std::vector<std::string>{"rating"});
  ASSERT_EQ(t.overflow[0].size(), 2u);
  EXPECT_EQ(t.overflow[0].at("title").value, "T u1");
  EXPECT_EQ(code_of([&] { reg.render(sample(), "", {{"columns", "nope"}}, kCtx); }), Errc::invalid_option);
  EXPECT_EQ(code_of([&] { reg.render(sample(), "", {{"display_limit", -1}}, kCtx); }), Errc::invalid_option);
}

TEST(Visualizers, GroupByVenue) {
  VisualizerRegistry reg;
  auto model = reg.render(sample(), "group_by_property_value", {{"property", "venue"}}, kCtx);
  auto& g = std::get<GroupedModel>(model);
  ASSERT_EQ(g.groups.size(), 2u);
  EXPECT_EQ(g.groups[0].first, "journal");
  EXPECT_EQ(g.groups[0].second.size(), 2u);
  EXPECT_EQ(g.groups[1].first, "conference");
  ASSERT_EQ(g.missing_group.size(), 1u);
  EXPECT_EQ(g.missing_group[0].target_url, "u3");
}

TEST(Visualizers, AggregateCounts) {
  VisualizerRegistry reg;
  auto model = reg.render(sample(), "aggregate_count", {{"property", "rating"}}, kCtx);
  auto& a = std::get<AggregateModel>(model);
  EXPECT_EQ(a.counts, (std::vector<std::pair<std::string, int>>{{"4.5", 2}, {"4.0", 1}, {"3.0", 1}}));
  auto j = to_json(model);
  EXPECT_EQ(j["kind"], "aggregate");
}

TEST(Visualizers, OptionErrors) {
  VisualizerRegistry reg;
  EXPECT_EQ(code_of([&] { reg.render(sample(), "group_by_property_value", json::object(), kCtx); }),
            Errc::invalid_option);
  EXPECT_EQ(code_of([&] { reg.render(sample(), "group_by_property_value", {{"property", "nope"}}, kCtx); }),
            Errc::invalid_option);
  EXPECT_EQ(code_of([&] { reg.render(sample(), "aggregate_count", {{"property", "venue"}, {"x", 1}}, kCtx); }),
            Errc::invalid_option);
  EXPECT_EQ(code_of([&] { reg.render(sample(), "nope", json::object(), kCtx); }), Errc::unknown_visualizer);
}

TEST(Visualizers, CustomRegistration) {
  VisualizerRegistry reg;
  VisualizerDescriptor d{"count_items", "Count", {{"label", OptionType::enumeration, "n", {"n", "total"}, false}}};
  reg.register_visualizer(d, [](const ResultSet& rs, const json& opts, const RenderContext&) -> PresentationModel {
    return CustomModel{{{opts["label"].get<std::string>(), rs.items.size()}}};
  });
  EXPECT_EQ(code_of([&] {
              reg.register_visualizer(d, [](const ResultSet&, const json&, const RenderContext&) -> PresentationModel {
                return CustomModel{};
              });
            }),
            Errc::duplicate_id);
  auto model = reg.render(sample(), "count_items", {{"label", "total"}});
  EXPECT_EQ(std::get<CustomModel>(model).data["total"], 4);
  EXPECT_EQ(code_of([&] { reg.render(sample(), "count_items", {{"label", "other"}}); }), Errc::invalid_option);
  EXPECT_EQ(to_json(model)["kind"], "custom");
}

TEST(Visualizers, ConservationOnRandomResults) {
  VisualizerRegistry reg;
  svc::testing::SpecGenerator gen(3);
  std::vector<std::string> props{"a", "b", "c"};
  for (int i = 0; i < 200; ++i) {
    auto rs = gen.result_set(props);
    auto t = std::get<TableModel>(reg.render(rs, "", json::object(), RenderContext{props}));
    ASSERT_EQ(t.rows.size(), rs.items.size());
    auto g = std::get<GroupedModel>(reg.render(rs, "group_by_property_value", {{"property", "a"}}, RenderContext{props}));
    std::size_t grouped = g.missing_group.size();
    for (const auto& [k, v] : g.groups) grouped += v.size();
    ASSERT_EQ(grouped, rs.items.size());
    auto a = std::get<AggregateModel>(reg.render(rs, "aggregate_count", {{"property", "b"}}, RenderContext{props}));
    std::size_t counted = 0, present = 0;
    for (const auto& [k, n] : a.counts) counted += static_cast<std::size_t>(n);
    for (const auto& o : rs.items) present += o.value("b").is_missing() ? 0 : 1;
    ASSERT_EQ(counted, present);
  }
}
