#include <gtest/gtest.h>

#include "svc/error.hpp"
#include "svc/klm.hpp"

using namespace svc;
using namespace svc::klm;

namespace {
std::string scenario(const char* name) { return std::string(SVC_SOURCE_DIR) + "/scenarios/" + name; }
}

TEST(Seconds, ParseAndFormat) {
  EXPECT_EQ(Seconds::parse("8.7").centis(), 870);
  EXPECT_EQ(Seconds::parse("8,7").centis(), 870);
  EXPECT_EQ(Seconds::parse("19.60").centis(), 1960);
  EXPECT_EQ(Seconds::from_double(1.15).centis(), 115);
  EXPECT_EQ(Seconds::from_centis(4660).str(), "46.6");
  EXPECT_EQ(Seconds::from_centis(1800).str(), "18.0");
  EXPECT_EQ(Seconds::from_centis(115).str(), "1.15");
  EXPECT_THROW(Seconds::from_double(0.001), Error);
  EXPECT_THROW(Seconds::parse("1.234"), Error);
  EXPECT_THROW(Seconds::parse("abc"), Error);
}

TEST(Klm, TableOneTotals) {
  auto base = estimate(load_scenario(scenario("table1_baseline.json")));
  auto with = estimate(load_scenario(scenario("table1_with_ss.json")));
  auto define = estimate(load_scenario(scenario("define_service.json")));
  EXPECT_EQ(base.total.str(), "46.6");
  EXPECT_EQ(with.total.str(), "18.0");
  EXPECT_EQ(define.total.str(), "39.2");
  EXPECT_EQ(base.per_step.size(), 6u);
}

TEST(Klm, CompareMatchesRepeatedLabels) {
  auto cmp = compare(load_scenario(scenario("table1_baseline.json")), load_scenario(scenario("table1_with_ss.json")));
  EXPECT_EQ(cmp.delta.str(), "28.6");
  ASSERT_EQ(cmp.steps.size(), 6u);
  for (const auto& s : cmp.steps) {
    EXPECT_TRUE(s.a.has_value());
    EXPECT_TRUE(s.b.has_value());
  }
  EXPECT_EQ(cmp.steps[2].delta.str(), "14.4");
  EXPECT_EQ(cmp.steps[4].delta.str(), "14.2");
}

TEST(Klm, OneSidedSteps) {
  KlmScenario a{"a", {{"x", Seconds::parse("1.0"), {}}, {"y", Seconds::parse("2.0"), {}}}};
  KlmScenario b{"b", {{"x", Seconds::parse("0.5"), {}}, {"z", Seconds::parse("1.0"), {}}}};
  auto cmp = compare(a, b);
  EXPECT_EQ(cmp.delta.str(), "1.5");
  ASSERT_EQ(cmp.steps.size(), 3u);
  EXPECT_FALSE(cmp.steps[2].a.has_value());
  EXPECT_EQ(cmp.steps[2].label, "z");
}

TEST(Klm, Operators) {
  auto s = scenario_from_json(nlohmann::json::parse(R"({"name":"t","steps":[
      {"label":"type","operators":[["M",1],["K",4]]},
      {"label":"click","operators":["P","B","B"]}]})"));
  auto e = estimate(s);
  EXPECT_EQ(e.per_step[0].seconds.centis(), 135 + 4 * 28);
  EXPECT_EQ(e.per_step[1].seconds.centis(), 110 + 40);
  auto fast = table_from_json({{"K", 0.2}});
  EXPECT_EQ(estimate(s, fast).per_step[0].seconds.centis(), 135 + 80);
  EXPECT_THROW(table_from_json({{"K", 0.205}}), Error);
  try {
    estimate(scenario_from_json(nlohmann::json::parse(R"({"name":"t","steps":[{"label":"x","operators":["Q"]}]})")));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::unknown_operator);
  }
}

TEST(Klm, JsonTotals) {
  auto j = to_json(estimate(load_scenario(scenario("table1_baseline.json"))));
  EXPECT_DOUBLE_EQ(j["total"].get<double>(), 46.6);
}
