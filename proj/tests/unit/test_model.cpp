#include <gtest/gtest.h>

#include <set>

#include "generators.hpp"
#include "svc/error.hpp"
#include "svc/fixtures.hpp"
#include "svc/serialize.hpp"
#include "svc/validate.hpp"

using namespace svc;

namespace {

ServiceSpec sample() { return fixtures::fixture_spec(fixtures::Mode::form_reload, "http://127.0.0.1:8765", true); }

bool has_problem(const ValidationReport& r, const std::string& path) {
  for (const auto& p : r.problems)
    if (p.path == path) return true;
  return false;
}

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::invalid_argument;
}

}  // namespace

TEST(Validate, FixtureSpecsAreValid) {
  for (auto mode : {fixtures::Mode::form_reload, fixtures::Mode::ajax_fragment, fixtures::Mode::keystroke_ajax,
                    fixtures::Mode::infinite_scroll, fixtures::Mode::formless}) {
    auto report = validate_spec(fixtures::fixture_spec(mode, "http://127.0.0.1:1", mode != fixtures::Mode::infinite_scroll));
    EXPECT_TRUE(report.ok()) << fixtures::to_string(mode) << ": " << report.summary();
  }
  EXPECT_TRUE(validate_spec(fixtures::fixture_json_spec("http://127.0.0.1:1")).ok());
}

TEST(Validate, MissingTargetUrlIsAnError) {
  auto s = sample();
  s.result_spec.target_url.reset();
  auto r = validate_spec(s);
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(has_problem(r, "result_spec.target_url"));
}

TEST(Validate, TargetUrlMustBeAnAttribute) {
  auto s = sample();
  s.result_spec.target_url->extract = ExtractRule::text();
  EXPECT_TRUE(has_problem(validate_spec(s), "result_spec.target_url.extract"));
}

TEST(Validate, ContainerNeedsExpectMany) {
  auto s = sample();
  s.result_spec.container.expect_many = false;
  EXPECT_TRUE(has_problem(validate_spec(s), "result_spec.container.expect_many"));
}

TEST(Validate, InputMustBeUnique) {
  auto s = sample();
  s.binding.input.expect_many = true;
  EXPECT_TRUE(has_problem(validate_spec(s), "binding.input.expect_many"));
}

TEST(Validate, BadSelectorReportsPath) {
  auto s = sample();
  s.binding.input = Selector::css("div[");
  EXPECT_TRUE(has_problem(validate_spec(s), "binding.input.expression"));
}

TEST(Validate, DuplicatePropertyNames) {
  auto s = sample();
  s.result_spec.properties.push_back(s.result_spec.properties.front());
  EXPECT_FALSE(validate_spec(s).ok());
}

TEST(Validate, LocalOrderingNeedsKnownProperty) {
  auto s = sample();
  s.orderings.push_back({"x", LocalOrdering{"nope", SortDirection::asc, SortComparator::lexical}});
  EXPECT_FALSE(validate_spec(s).ok());
}

TEST(Validate, AjaxStrategyNeedsTemplateWithQuery) {
  auto s = sample();
  s.strategy = StrategyConfig{StrategyVariant::write_for_ajax_call, "", std::nullopt};
  EXPECT_TRUE(has_problem(validate_spec(s), "strategy.request_template"));
  s.strategy->request_template = RequestTemplate{HttpMethod::get, "/api?page={page}", {}, ResponseKind::html_fragment};
  EXPECT_TRUE(has_problem(validate_spec(s), "strategy.request_template.url_template"));
  s.strategy->request_template->url_template = "/api?q={query}&n={nope}";
  EXPECT_FALSE(validate_spec(s).ok());
  s.strategy->request_template->url_template = "/api?q={query}";
  EXPECT_TRUE(validate_spec(s).ok()) << validate_spec(s).summary();
}

TEST(Validate, ApiBasedNeedsProvider) {
  auto s = fixtures::fixture_json_spec("http://127.0.0.1:1");
  s.strategy->provider_id.clear();
  EXPECT_TRUE(has_problem(validate_spec(s), "strategy.provider_id"));
}

TEST(Validate, MissingOptionalPartsOnlyWarn) {
  auto s = sample();
  s.strategy.reset();
  s.binding.next_page.reset();
  auto r = validate_spec(s);
  EXPECT_TRUE(r.ok());
  EXPECT_GE(r.warnings().size(), 2u);
}

TEST(Validate, QueryChecks) {
  auto s = sample();
  SearchQuery q{"borges", {"Journal only"}, "By rating", 1};
  EXPECT_TRUE(validate_query(s, q).ok());
  q.active_filters = {"Journal only", "Conference only"};
  EXPECT_FALSE(validate_query(s, q).ok());
  q.active_filters = {"Nope"};
  EXPECT_FALSE(validate_query(s, q).ok());
  q.active_filters.clear();
  q.active_ordering = "Nope";
  EXPECT_FALSE(validate_query(s, q).ok());
  q.active_ordering.reset();
  q.page = 0;
  EXPECT_FALSE(validate_query(s, q).ok());
}

TEST(Validate, Timestamps) {
  EXPECT_TRUE(is_timestamp("2016-12-01T00:00:00Z"));
  EXPECT_TRUE(is_timestamp("2016-12-01T00:00:00.123+01:00"));
  EXPECT_FALSE(is_timestamp("2016-12-01"));
  EXPECT_FALSE(is_timestamp("yesterday"));
  EXPECT_TRUE(is_timestamp(now_timestamp()));
}

TEST(Validate, Placeholders) {
  auto names = template_placeholders("/s?q={query}&p={page}&x={query}");
  ASSERT_EQ(names.size(), 2u);
  EXPECT_EQ(names[0], "query");
  EXPECT_EQ(names[1], "page");
}

TEST(Serialize, RoundTripIsByteStable) {
  auto s = sample();
  std::string text = serialize(s);
  EXPECT_EQ(deserialize(text), s);
  EXPECT_EQ(serialize(deserialize(text)), text);
  EXPECT_EQ(text.back(), '\n');
}

TEST(Serialize, AbsentOptionalsAreOmitted) {
  auto s = sample();
  s.strategy.reset();
  s.binding.reveal.reset();
  auto j = to_json(s);
  EXPECT_FALSE(j.contains("strategy"));
  EXPECT_FALSE(j["binding"].contains("reveal"));
}

TEST(Serialize, VersionMismatch) {
  auto j = to_json(sample());
  j["metadata"]["format_version"] = "2";
  EXPECT_EQ(code_of([&] { deserialize(j.dump()); }), Errc::version_mismatch);
}

TEST(Serialize, MissingInputNamesPath) {
  auto j = to_json(sample());
  j["binding"].erase("input");
  try {
    deserialize(j.dump());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::parse_error);
    EXPECT_NE(std::string(e.what()).find("binding.input"), std::string::npos) << e.what();
  }
}

TEST(Serialize, UnknownKeyRejected) {
  auto j = to_json(sample());
  j["binding"]["surprise"] = 1;
  EXPECT_EQ(code_of([&] { deserialize(j.dump()); }), Errc::parse_error);
}

TEST(Serialize, SyntaxErrorHasLineAndColumn) {
  try {
    deserialize("{\n  \"id\": ,\n}");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::parse_error);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(Serialize, RandomSpecsRoundTrip) {
  svc::testing::SpecGenerator gen(7);
  for (int i = 0; i < 300; ++i) {
    auto s = gen.spec(i % 2 == 0);
    std::string text = serialize(s);
    ASSERT_EQ(deserialize(text), s) << text;
    ASSERT_EQ(serialize(deserialize(text)), text);
  }
}

TEST(Serialize, RandomSpecsAreValid) {
  svc::testing::SpecGenerator gen(11);
  for (int i = 0; i < 200; ++i) {
    auto s = gen.spec();
    auto r = validate_spec(s);
    ASSERT_TRUE(r.ok()) << r.summary() << "\n" << serialize(s);
  }
}

TEST(Bundle, ExportImportExportIsStable) {
  auto a = sample();
  auto b = fixtures::fixture_json_spec("http://127.0.0.1:8765");
  std::string first = export_bundle({a, b});
  auto result = import_bundle(first);
  ASSERT_EQ(result.imported.size(), 2u);
  EXPECT_TRUE(result.rejected.empty());
  EXPECT_EQ(export_bundle(result.imported), first);
}

TEST(Bundle, InvalidEntryIsRejectedAlone) {
  auto bad = sample();
  bad.id = "broken";
  bad.result_spec.target_url.reset();
  auto j = parse_json(export_bundle({sample(), bad}));
  auto result = import_bundle(j.dump());
  ASSERT_EQ(result.imported.size(), 1u);
  ASSERT_EQ(result.rejected.size(), 1u);
  EXPECT_EQ(result.rejected[0].index, 1u);
  EXPECT_EQ(result.rejected[0].id, "broken");
  EXPECT_FALSE(result.rejected[0].reasons.empty());
}

TEST(Bundle, DoubleImportRenames) {
  auto s = sample();
  std::set<std::string> taken;
  auto first = import_bundle(export_bundle({s}), [&](const std::string& id) { return taken.count(id) > 0; });
  ASSERT_EQ(first.imported.size(), 1u);
  taken.insert(first.imported[0].id);
  auto second = import_bundle(export_bundle({s}), [&](const std::string& id) { return taken.count(id) > 0; });
  ASSERT_EQ(second.imported.size(), 1u);
  EXPECT_NE(second.imported[0].id, s.id);
  EXPECT_EQ(second.imported[0].id, s.id + "-2");
  EXPECT_EQ(second.imported[0].name, s.name + " (imported)");
  ASSERT_EQ(second.renamed.size(), 1u);
}

TEST(Bundle, BareSpecAccepted) {
  auto result = import_bundle(serialize(sample()));
  ASSERT_EQ(result.imported.size(), 1u);
}

TEST(Bundle, ForeignVersionRejected) {
  auto j = parse_json(export_bundle({sample()}));
  j["format_version"] = "9";
  EXPECT_EQ(code_of([&] { import_bundle(j.dump()); }), Errc::version_mismatch);
}
