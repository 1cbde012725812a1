#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "svc/cli.hpp"
#include "svc/fixtures.hpp"
#include "svc/serialize.hpp"

using namespace svc;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
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
    dir = fs::temp_directory_path() / ("svc-cli-" + std::to_string(std::random_device{}()));
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  int run(std::vector<std::string> args) {
    out.str("");
    err.str("");
    args.insert(args.begin(), {"--store-dir", (dir / "store").string()});
    CliContext ctx;
    ctx.fetcher = &fetcher;
    ctx.clock = [] { return std::string("2020-01-01T00:00:00Z"); };
    return run_cli(args, out, err, ctx);
  }

  std::string write(const std::string& name, const std::string& text) {
    auto p = dir / name;
    std::ofstream(p) << text;
    return p.string();
  }

  static std::string scenario(const char* name) { return std::string(SVC_SOURCE_DIR) + "/scenarios/" + name; }

  static inline fixtures::FixtureServer* fixture = nullptr;
  HttpFetcher fetcher;
  fs::path dir;
  std::ostringstream out, err;
};

}  // namespace

TEST_F(CliTest, KlmEstimateAndCompare) {
  ASSERT_EQ(run({"klm", "estimate", scenario("table1_baseline.json")}), 0) << err.str();
  EXPECT_NE(out.str().find("total 46.6\n"), std::string::npos) << out.str();
  ASSERT_EQ(run({"klm", "estimate", scenario("table1_with_ss.json")}), 0);
  EXPECT_NE(out.str().find("total 18.0\n"), std::string::npos);
  ASSERT_EQ(run({"klm", "estimate", scenario("define_service.json")}), 0);
  EXPECT_NE(out.str().find("total 39.2\n"), std::string::npos);
  ASSERT_EQ(run({"klm", "compare", scenario("table1_baseline.json"), scenario("table1_with_ss.json")}), 0);
  EXPECT_NE(out.str().find("delta 28.6\n"), std::string::npos) << out.str();
  ASSERT_EQ(run({"klm", "estimate", scenario("table1_baseline.json"), "--json"}), 0);
  EXPECT_DOUBLE_EQ(json::parse(out.str())["total"].get<double>(), 46.6);
  EXPECT_EQ(run({"klm", "estimate", scenario("table1_baseline.json"), "--operator", "K"}), 1);
  EXPECT_EQ(run({"klm", "estimate", "/nonexistent.json"}), 1);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({"frobnicate"}), 2);
  EXPECT_EQ(run({"search"}), 2);
  EXPECT_EQ(run({"detect", "x", "--probe", "a"}), 2);
  EXPECT_EQ(run({"--help"}), 0);
  EXPECT_NE(out.str().find("search"), std::string::npos);
}

TEST_F(CliTest, ValidateImportListShowExport) {
  auto spec = fixtures::fixture_spec(fixtures::Mode::form_reload, fixture->base_url(), true);
  std::string file = write("s.json", serialize(spec));
  EXPECT_EQ(run({"validate", file}), 0) << out.str() << err.str();
  EXPECT_NE(out.str().find("valid\n"), std::string::npos);

  auto bad = spec;
  bad.result_spec.target_url.reset();
  EXPECT_EQ(run({"validate", write("bad.json", serialize(bad))}), 1);
  EXPECT_NE(out.str().find("result_spec.target_url"), std::string::npos) << out.str();

  ASSERT_EQ(run({"import", file}), 0) << err.str();
  EXPECT_EQ(out.str(), "imported " + spec.id + "\n");
  ASSERT_EQ(run({"list"}), 0);
  EXPECT_EQ(out.str(), spec.id + "\t" + spec.name + "\n");
  ASSERT_EQ(run({"show", spec.id}), 0);
  EXPECT_EQ(out.str(), serialize(spec));
  EXPECT_EQ(run({"show", "nope"}), 1);
  EXPECT_NE(err.str().find("not-found"), std::string::npos);

  std::string bundle = (dir / "bundle.json").string();
  ASSERT_EQ(run({"export", "-o", bundle}), 0);
  ASSERT_EQ(run({"import", bundle}), 0);
  EXPECT_NE(out.str().find("renamed " + spec.id + " -> " + spec.id + "-2"), std::string::npos) << out.str();
}

TEST_F(CliTest, DetectAndSearch) {
  auto draft = fixtures::fixture_spec(fixtures::Mode::keystroke_ajax, fixture->base_url());
  std::string file = write("keys.json", serialize(draft));
  ASSERT_EQ(run({"import", file}), 0) << err.str();
  ASSERT_EQ(run({"detect", draft.id, "--probe", "borges", "--probe", "cortázar", "--save"}), 0) << err.str();
  EXPECT_EQ(json::parse(out.str())["variant"], "write_for_ajax_call");

  ASSERT_EQ(run({"search", draft.id, "borges"}), 0) << err.str();
  EXPECT_NE(out.str().find("4 results, page 1\n"), std::string::npos) << out.str();
  EXPECT_NE(out.str().find("title"), std::string::npos);

  ASSERT_EQ(run({"search", draft.id, "borges", "--json"}), 0);
  EXPECT_EQ(json::parse(out.str())["items"].size(), 4u);

  ASSERT_EQ(run({"search", draft.id, "borges", "--viz", "aggregate_count", "--viz-option", "property=venue"}), 0)
      << err.str();
  EXPECT_NE(out.str().find("count"), std::string::npos);

  ASSERT_EQ(run({"search", draft.id, "borges", "--dry-run", "--page", "2"}), 0);
  EXPECT_NE(out.str().find("  page=2\n"), std::string::npos) << out.str();

  EXPECT_EQ(run({"search", draft.id, "borges", "--filter", "Nope"}), 1);
  EXPECT_EQ(run({"search", draft.id, "borges", "--viz", "nope"}), 1);
  EXPECT_NE(err.str().find("unknown-visualizer"), std::string::npos) << err.str();
}

TEST_F(CliTest, StoreDirFromEnvironment) {
  std::ostringstream o, e;
  CliContext ctx;
  ctx.fetcher = &fetcher;
  std::string env_dir = (dir / "envstore").string();
  ctx.env = [&](const std::string& name) -> std::optional<std::string> {
    if (name == "SVC_STORE_DIR") return env_dir;
    return std::nullopt;
  };
  auto spec = fixtures::fixture_spec(fixtures::Mode::form_reload, fixture->base_url(), true);
  ASSERT_EQ(run_cli({"import", write("s.json", serialize(spec))}, o, e, ctx), 0) << e.str();
  EXPECT_TRUE(fs::exists(fs::path(env_dir) / (spec.id + ".svcspec.json")));
}
