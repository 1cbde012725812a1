#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <httplib.h>

#include "svc/api.hpp"
#include "svc/cli.hpp"
#include "svc/fixtures.hpp"
#include "svc/selector.hpp"
#include "svc/serialize.hpp"
#include "svc/validate.hpp"

using namespace svc;
namespace fs = std::filesystem;

namespace {

std::string fixed_clock() { return "2020-01-01T00:00:00Z"; }

class ApiTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    fixture = new fixtures::FixtureServer();
    fixture->start(0);
  }
  static void TearDownTestSuite() {
    fixture->stop();
    delete fixture;
  }

  void SetUp() override {
    dir = fs::temp_directory_path() / ("svc-api-" + std::to_string(std::random_device{}()));
    store = std::make_unique<SpecStore>(dir);
    ApiConfig cfg;
    cfg.clock = fixed_clock;
    server = std::make_unique<ApiServer>(*store, fetcher, cfg);
    server->start(0);
    client = std::make_unique<httplib::Client>("127.0.0.1", server->port());
    client->set_read_timeout(30, 0);
  }
  void TearDown() override {
    server->stop();
    fs::remove_all(dir);
  }

  httplib::Result post(const std::string& path, const json& body) {
    return client->Post(path.c_str(), body.dump(), "application/json");
  }

  static json body(const httplib::Result& r) { return json::parse(r->body); }

  std::string base() const { return fixture->base_url(); }

  static inline fixtures::FixtureServer* fixture = nullptr;
  fs::path dir;
  HttpFetcher fetcher;
  std::unique_ptr<SpecStore> store;
  std::unique_ptr<ApiServer> server;
  std::unique_ptr<httplib::Client> client;
};

}  // namespace

TEST_F(ApiTest, CreateSearchAndErrors) {
  auto spec = fixtures::fixture_spec(fixtures::Mode::form_reload, base(), true);
  auto r = post("/services", to_json(spec));
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 201) << r->body;
  EXPECT_EQ(body(r)["id"], spec.id);
  EXPECT_EQ(r->get_header_value("Access-Control-Allow-Origin"), "*");

  EXPECT_EQ(post("/services", to_json(spec))->status, 422);

  r = post("/services/" + spec.id + "/search", {{"keywords", "borges"}});
  ASSERT_EQ(r->status, 200) << r->body;
  auto rs = body(r);
  EXPECT_EQ(rs["items"].size(), 4u);
  EXPECT_EQ(rs["items"][0]["provenance"]["fetched_at"], "2020-01-01T00:00:00Z");

  r = post("/services/" + spec.id + "/search", {{"keywords", "borges"}, {"filters", {"Nope"}}});
  EXPECT_EQ(r->status, 400) << r->body;
  EXPECT_EQ(body(r)["error"], "validation-error");

  r = post("/services/nope/search", {{"keywords", "x"}});
  EXPECT_EQ(r->status, 404);
  EXPECT_EQ(body(r)["error"], "not-found");

  r = client->Post("/services", "{bad", "application/json");
  EXPECT_EQ(r->status, 400);
  EXPECT_EQ(body(r)["error"], "parse-error");
}

TEST_F(ApiTest, InvalidSpecGets400WithReport) {
  auto spec = fixtures::fixture_spec(fixtures::Mode::form_reload, base(), true);
  spec.result_spec.target_url.reset();
  auto r = post("/services", to_json(spec));
  EXPECT_EQ(r->status, 400) << r->body;
  EXPECT_FALSE(store->contains(spec.id));
}

TEST_F(ApiTest, IdIsSluggedFromName) {
  auto j = to_json(fixtures::fixture_spec(fixtures::Mode::form_reload, base(), true));
  j.erase("id");
  j["name"] = "My Book Search!";
  j["metadata"]["created"] = "";
  auto r = post("/services", j);
  ASSERT_EQ(r->status, 201) << r->body;
  std::string id = body(r)["id"];
  EXPECT_EQ(id, "my-book-search");
  EXPECT_TRUE(is_timestamp(store->load(id).metadata.created));
}

TEST_F(ApiTest, GetPutDeleteExportImport) {
  auto spec = fixtures::fixture_spec(fixtures::Mode::form_reload, base(), true);
  store->save(spec);
  auto r = client->Get(("/services/" + spec.id).c_str());
  ASSERT_EQ(r->status, 200);
  EXPECT_EQ(r->body, serialize(spec));

  auto list = body(client->Get("/services"));
  EXPECT_EQ(list["services"].size(), 1u);

  auto changed = spec;
  changed.name = "Renamed";
  r = client->Put(("/services/" + spec.id).c_str(), to_json(changed).dump(), "application/json");
  EXPECT_EQ(r->status, 200) << r->body;
  EXPECT_EQ(store->load(spec.id).name, "Renamed");
  r = client->Put("/services/other", to_json(changed).dump(), "application/json");
  EXPECT_EQ(r->status, 404);

  auto exported = client->Get(("/services/" + spec.id + "/export").c_str());
  ASSERT_EQ(exported->status, 200);
  r = client->Post("/services/import", exported->body, "application/json");
  ASSERT_EQ(r->status, 200) << r->body;
  auto imported = body(r);
  ASSERT_EQ(imported["imported"].size(), 1u);
  EXPECT_EQ(imported["imported"][0], spec.id + "-2");
  EXPECT_EQ(store->ids().size(), 2u);

  EXPECT_EQ(client->Delete(("/services/" + spec.id).c_str())->status, 204);
  EXPECT_EQ(client->Delete(("/services/" + spec.id).c_str())->status, 404);
}

TEST_F(ApiTest, FetchSuggestDetectRender) {
  auto r = post("/fetch", {{"url", base() + "/form/search?q=borges"}});
  ASSERT_EQ(r->status, 200) << r->body;
  auto snap = body(r);
  auto doc = html::Document::parse(snap["sanitized_html"].get<std::string>(), snap["url"]);
  auto titles = evaluate(Selector::css("li.result a.title"), doc);
  ASSERT_FALSE(titles.empty());
  json path = path_of(*titles[1]).steps;
  r = post("/selectors/suggest", {{"snapshot_id", snap["snapshot_id"]}, {"node_path", path}});
  ASSERT_EQ(r->status, 200) << r->body;
  auto suggestions = body(r)["suggestions"];
  bool generalized = false;
  for (const auto& s : suggestions) generalized |= s["specificity"] == "generalized" && s["match_count"] == titles.size();
  EXPECT_TRUE(generalized) << suggestions.dump();
  EXPECT_EQ(post("/selectors/suggest", {{"snapshot_id", "0000000000000000"}, {"node_path", path}})->status, 404);
  EXPECT_EQ(post("/fetch", {{"url", "http://127.0.0.1:1/"}})->status, 502);

  auto draft = fixtures::fixture_spec(fixtures::Mode::ajax_fragment, base());
  store->save(draft);
  r = post("/services/" + draft.id + "/detect-strategy", {{"probe_a", "borges"}, {"probe_b", "cortázar"}});
  ASSERT_EQ(r->status, 200) << r->body;
  EXPECT_EQ(body(r)["variant"], "write_and_click_for_ajax_call");
  EXPECT_TRUE(store->load(draft.id).strategy.has_value());

  auto scroll = fixtures::fixture_spec(fixtures::Mode::infinite_scroll, base());
  store->save(scroll);
  r = post("/services/" + scroll.id + "/detect-strategy", {{"probe_a", "borges"}, {"probe_b", "cortázar"}});
  EXPECT_EQ(r->status, 422);
  EXPECT_EQ(body(r)["error"], "no-applicable-strategy");

  auto viz = body(client->Get("/visualizers"));
  EXPECT_EQ(viz["visualizers"].size(), 3u);
  r = post("/services/" + draft.id + "/render",
           {{"search", {{"keywords", "borges"}}}, {"visualizer_id", "group_by_property_value"}, {"options", {{"property", "venue"}}}});
  ASSERT_EQ(r->status, 200) << r->body;
  EXPECT_EQ(body(r)["kind"], "grouped");
  r = post("/services/" + draft.id + "/render", {{"search", {{"keywords", "borges"}}}, {"visualizer_id", "nope"}});
  EXPECT_EQ(r->status, 422);
}

TEST_F(ApiTest, KlmEndpoints) {
  auto load = [](const char* name) {
    std::ifstream in(std::string(SVC_SOURCE_DIR) + "/scenarios/" + name);
    return json::parse(in);
  };
  auto r = post("/klm/estimate", {{"scenario", load("table1_baseline.json")}});
  ASSERT_EQ(r->status, 200) << r->body;
  EXPECT_DOUBLE_EQ(body(r)["total"].get<double>(), 46.6);
  r = post("/klm/compare", {{"a", load("table1_baseline.json")}, {"b", load("table1_with_ss.json")}});
  ASSERT_EQ(r->status, 200) << r->body;
  EXPECT_DOUBLE_EQ(body(r)["delta"].get<double>(), 28.6);
  r = post("/klm/estimate", {{"scenario", {{"name", "x"}, {"steps", {{{"label", "a"}, {"operators", {"Q"}}}}}}}});
  EXPECT_EQ(r->status, 422);
}

TEST_F(ApiTest, SearchOutputMatchesCli) {
  auto spec = fixtures::fixture_spec(fixtures::Mode::form_reload, base(), true);
  store->save(spec);
  auto api = post("/services/" + spec.id + "/search",
                  {{"keywords", "borges"}, {"filters", {"Journal only"}}, {"ordering", "By rating"}});
  ASSERT_EQ(api->status, 200);

  std::ostringstream out, err;
  CliContext ctx;
  ctx.fetcher = &fetcher;
  ctx.clock = fixed_clock;
  int code = run_cli({"--store-dir", dir.string(), "search", spec.id, "borges", "--filter", "Journal only", "--order",
                      "By rating", "--json"},
                     out, err, ctx);
  ASSERT_EQ(code, 0) << err.str();
  EXPECT_EQ(out.str(), api->body);
}
