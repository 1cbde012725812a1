// One PASS/FAIL line per primary acceptance criterion. Exit status is the
// number of failures.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "generators.hpp"
#include "svc/cli.hpp"
#include "svc/engine.hpp"
#include "svc/error.hpp"
#include "svc/fixtures.hpp"
#include "svc/klm.hpp"
#include "svc/serialize.hpp"
#include "svc/store.hpp"
#include "svc/visualizers.hpp"

using namespace svc;
using fixtures::Mode;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Failure {
  std::string why;
};

void require(bool ok, const std::string& why) {
  if (!ok) throw Failure{why};
}

int failures = 0;

void criterion(const std::string& name, const std::function<std::string()>& body) {
  std::string detail;
  bool ok = false;
  try {
    detail = body();
    ok = true;
  } catch (const Failure& f) {
    detail = f.why;
  } catch (const Error& e) {
    detail = std::string(e.name()) + ": " + e.what();
  } catch (const std::exception& e) {
    detail = e.what();
  }
  if (!ok) ++failures;
  std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << std::endl;
}

std::string scenario(const char* name) { return std::string(SVC_SOURCE_DIR) + "/scenarios/" + name; }

std::vector<DomainObject> all_pages(const ServiceSpec& spec, const SearchQuery& q, Fetcher& f) {
  auto out = execute(spec, q, f);
  std::vector<DomainObject> items = out.results.items;
  int guard = 0;
  while (out.cursor.has_next && ++guard < 20) {
    out = next_page(out.cursor, f);
    items.insert(items.end(), out.results.items.begin(), out.results.items.end());
  }
  return items;
}

std::string klm_check() {
  auto start = Clock::now();
  std::ostringstream out, err;
  std::map<std::string, std::string> totals;
  for (const char* name : {"table1_baseline.json", "table1_with_ss.json", "define_service.json"}) {
    out.str("");
    require(run_cli({"klm", "estimate", scenario(name)}, out, err) == 0, err.str());
    std::string text = out.str();
    auto pos = text.rfind("total ");
    require(pos != std::string::npos, "no total line for " + std::string(name));
    totals[name] = text.substr(pos + 6, text.find('\n', pos) - pos - 6);
  }
  require(totals["table1_baseline.json"] == "46.6", "baseline total " + totals["table1_baseline.json"]);
  require(totals["table1_with_ss.json"] == "18.0", "with-service total " + totals["table1_with_ss.json"]);
  require(totals["define_service.json"] == "39.2", "definition total " + totals["define_service.json"]);
  out.str("");
  require(run_cli({"klm", "compare", scenario("table1_baseline.json"), scenario("table1_with_ss.json")}, out, err) == 0,
          err.str());
  require(out.str().find("delta 28.6\n") != std::string::npos, "compare output:\n" + out.str());
  double t = seconds_since(start);
  require(t < 1.0, "took " + std::to_string(t) + " s");
  return "46.6 / 18.0 / 39.2, delta 28.6 in " + std::to_string(t) + " s";
}

std::string detection_check(const std::string& base, Fetcher& f) {
  auto start = Clock::now();
  for (auto mode : {Mode::form_reload, Mode::ajax_fragment, Mode::keystroke_ajax}) {
    auto st = detect_strategy(fixtures::fixture_spec(mode, base), "borges", "cortázar", f);
    require(st.variant == *fixtures::expected_variant(mode),
            std::string(fixtures::to_string(mode)) + " detected as " + std::string(to_string(st.variant)));
    auto draft = fixtures::fixture_spec(mode, base);
    draft.strategy = st;
    for (const char* probe : {"borges", "cortázar"})
      require(!execute(draft, SearchQuery{probe, {}, {}, 1}, f).results.items.empty(),
              std::string(fixtures::to_string(mode)) + ": probe not reproducible");
  }
  try {
    detect_strategy(fixtures::fixture_spec(Mode::infinite_scroll, base), "borges", "cortázar", f);
    throw Failure{"infinite_scroll was classified"};
  } catch (const Error& e) {
    require(e.code() == Errc::no_applicable_strategy, "infinite_scroll raised " + std::string(e.name()));
  }
  double t = seconds_since(start);
  require(t < 10.0, "took " + std::to_string(t) + " s");
  return "3 engines classified, infinite_scroll rejected in " + std::to_string(t) + " s";
}

std::string oracle_check(const std::string& base, Fetcher& f) {
  std::vector<std::pair<std::string, ServiceSpec>> engines;
  for (auto mode : {Mode::form_reload, Mode::ajax_fragment, Mode::keystroke_ajax, Mode::formless})
    engines.emplace_back(fixtures::to_string(mode), fixtures::fixture_spec(mode, base, true));
  engines.emplace_back("jsonapi", fixtures::fixture_json_spec(base));

  const std::vector<std::string> words{"borges", "cortázar", "a", "the", "e", "garcía", "LA", "el", "",
                                       "zzzz", "o", "de", "ficciones", "rayuela", "in"};
  const std::vector<std::optional<std::string>> venues{std::nullopt, "journal", "conference"};
  const std::vector<std::optional<std::string>> orderings{std::nullopt, "By rating", "By year", "Title (A-Z)",
                                                          "Rating (local)"};
  std::mt19937 rng(20161201);
  std::size_t checked = 0;
  for (int i = 0; i < 50; ++i) {
    std::string kw = words[rng() % words.size()];
    auto venue = venues[rng() % venues.size()];
    auto ordering = orderings[rng() % orderings.size()];
    std::optional<std::string> remote_sort;
    if (ordering == "By rating") remote_sort = "rating";
    if (ordering == "By year") remote_sort = "year";
    auto truth = fixtures::ground_truth(kw, venue, remote_sort);

    std::multiset<std::string> expected_urls;
    std::map<std::string, const fixtures::Book*> by_url;
    for (const auto& b : truth) {
      std::string u = fixtures::book_url(base, b.id);
      expected_urls.insert(u);
      by_url[u] = &b;
    }
    SearchQuery q{kw, {}, ordering, 1};
    if (venue) q.active_filters.push_back(*venue == "journal" ? "Journal only" : "Conference only");
    std::string label = "'" + kw + "' venue=" + venue.value_or("-") + " order=" + ordering.value_or("-");

    for (const auto& [name, spec] : engines) {
      auto items = all_pages(spec, q, f);
      std::multiset<std::string> got;
      for (const auto& o : items) got.insert(o.target_url);
      require(got == expected_urls, name + " " + label + ": " + std::to_string(got.size()) + " urls vs " +
                                        std::to_string(expected_urls.size()) + " expected");
      for (const auto& o : items) {
        const fixtures::Book& b = *by_url.at(o.target_url);
        require(o.value("title").value == b.title && o.value("author").value == b.author &&
                    o.value("rating").value == b.rating && o.value("venue").value == b.venue,
                name + " " + label + ": values differ for " + o.target_url);
      }
      if (remote_sort) {
        std::vector<std::string> order;
        for (const auto& o : items) order.push_back(o.target_url);
        std::vector<std::string> want;
        for (const auto& b : truth) want.push_back(fixtures::book_url(base, b.id));
        require(order == want, name + " " + label + ": remote order differs");
      }
      ++checked;
    }
  }
  return "50 combinations x " + std::to_string(engines.size()) + " engines (" + std::to_string(checked) +
         " runs) equal ground_truth";
}

std::string pagination_check(const std::string& base, Fetcher& f) {
  auto truth = fixtures::ground_truth("");
  require(truth.size() == 30, "ground truth has " + std::to_string(truth.size()) + " items, not 30");
  std::set<std::string> want;
  for (const auto& b : truth) want.insert(fixtures::book_url(base, b.id));
  std::vector<std::pair<std::string, ServiceSpec>> engines;
  for (auto mode : {Mode::form_reload, Mode::ajax_fragment, Mode::keystroke_ajax, Mode::formless})
    engines.emplace_back(fixtures::to_string(mode), fixtures::fixture_spec(mode, base, true));
  engines.emplace_back("jsonapi", fixtures::fixture_json_spec(base));
  for (const auto& [name, spec] : engines) {
    auto out = execute(spec, SearchQuery{"", {}, {}, 1}, f);
    try {
      prev_page(out.cursor, f);
      throw Failure{name + ": prev from page 1 did not fail"};
    } catch (const Error& e) {
      require(e.code() == Errc::no_such_page, name + ": prev raised " + std::string(e.name()));
    }
    std::vector<std::size_t> sizes;
    std::set<std::string> seen;
    std::size_t total = 0;
    for (;;) {
      sizes.push_back(out.results.items.size());
      for (const auto& o : out.results.items) seen.insert(o.target_url);
      total += out.results.items.size();
      if (!out.cursor.has_next) break;
      require(sizes.size() < 10, name + ": runaway pagination");
      out = next_page(out.cursor, f);
    }
    require(sizes == std::vector<std::size_t>{10, 10, 10}, name + ": page sizes differ from 10/10/10");
    require(seen.size() == total, name + ": pages overlap");
    require(seen == want, name + ": union differs from ground truth");
  }
  return "pages 10/10/10, disjoint, union = ground truth on " + std::to_string(engines.size()) +
         " engines; prev from page 1 raises no-such-page";
}

std::string enrichment_check(fixtures::FixtureServer& server, Fetcher& f) {
  auto spec = fixtures::fixture_spec(Mode::form_reload, server.base_url(), true);
  EngineOptions opts;
  opts.enrich = true;
  auto items = execute(spec, SearchQuery{"a", {}, {}, 1}, f, opts).results.items;
  require(items.size() >= 2, "too few items");
  for (const auto& o : items)
    require(!o.value("bibtex").is_missing(), "bibtex missing for " + o.target_url);

  std::string victim = items[1].target_url;
  int victim_id = std::stoi(victim.substr(victim.rfind('/') + 1));
  server.set_missing_details({victim_id});
  auto again = execute(spec, SearchQuery{"a", {}, {}, 1}, f, opts).results.items;
  server.set_missing_details({});
  std::size_t missing = 0;
  for (const auto& o : again) {
    if (o.value("bibtex").is_missing()) {
      ++missing;
      require(o.target_url == victim, "unexpected missing value for " + o.target_url);
    }
  }
  require(missing == 1, std::to_string(missing) + " items missing with one 404");
  return std::to_string(items.size()) + "/" + std::to_string(items.size()) +
         " filled; with one 404 exactly that item is missing";
}

std::string roundtrip_check() {
  svc::testing::SpecGenerator gen(42);
  for (int i = 0; i < 1000; ++i) {
    auto s = gen.spec(i % 4 != 0);
    std::string text = serialize(s);
    require(deserialize(text) == s, "spec " + std::to_string(i) + " changed:\n" + text);
    require(serialize(deserialize(text)) == text, "spec " + std::to_string(i) + " not byte-stable");
  }

  std::vector<ServiceSpec> specs;
  for (int i = 0; i < 25; ++i) specs.push_back(gen.spec());
  std::string first = export_bundle(specs);
  auto imported = import_bundle(first);
  require(imported.rejected.empty(), "valid specs rejected on import");
  require(export_bundle(imported.imported) == first, "export -> import -> export changed bytes");

  // importing again collides; after undoing the regenerated ids the bytes match
  std::set<std::string> taken;
  for (const auto& s : specs) taken.insert(s.id);
  auto again = import_bundle(first, [&](const std::string& id) { return taken.count(id) > 0; });
  require(again.imported.size() == specs.size() && again.renamed.size() == specs.size(), "collisions not renamed");
  for (std::size_t i = 0; i < again.imported.size(); ++i) {
    again.imported[i].id = again.renamed[i].first;
    auto& n = again.imported[i].name;
    n.erase(n.size() - std::string(" (imported)").size());
  }
  require(export_bundle(again.imported) == first, "renamed import differs beyond ids");

  fs::path dir = fs::temp_directory_path() / ("svc-accept-" + std::to_string(std::random_device{}()));
  {
    SpecStore store(dir);
    store.save(specs[0]);
    auto changed = specs[0];
    changed.name = "changed";
    store.set_fault_hook([](const fs::path&) { throw std::runtime_error("crash"); });
    try {
      store.save(changed);
      throw Failure{"fault hook did not fire"};
    } catch (const std::runtime_error&) {
    }
  }
  SpecStore reopened(dir);
  bool ok = reopened.load(specs[0].id) == specs[0] && reopened.load_errors().empty();
  for (const auto& e : fs::directory_iterator(dir))
    ok = ok && e.path().filename().string().find(".tmp") == std::string::npos;
  fs::remove_all(dir);
  require(ok, "store did not recover the pre-crash version cleanly");
  return "1000 specs round-trip; export/import/export byte-stable; store survives crash before rename";
}

std::string visualizer_check() {
  svc::testing::SpecGenerator gen(5);
  VisualizerRegistry reg;
  std::vector<std::string> props{"title", "venue", "rating"};
  RenderContext ctx{props};
  for (int i = 0; i < 500; ++i) {
    auto rs = gen.result_set(props);
    auto t = std::get<TableModel>(reg.render(rs, "table_of_properties", nlohmann::json::object(), ctx));
    require(t.rows.size() == rs.items.size(), "table row count");
    const std::string& p = props[static_cast<std::size_t>(i) % props.size()];
    auto g = std::get<GroupedModel>(reg.render(rs, "group_by_property_value", {{"property", p}}, ctx));
    std::multiset<std::string> members, items;
    for (const auto& [k, v] : g.groups)
      for (const auto& o : v) {
        require(o.value(p).value == k, "item in wrong group");
        members.insert(o.target_url);
      }
    for (const auto& o : g.missing_group) {
      require(o.value(p).is_missing(), "non-missing item in missing group");
      members.insert(o.target_url);
    }
    for (const auto& o : rs.items) items.insert(o.target_url);
    require(members == items, "grouped model is not a partition");
    auto a = std::get<AggregateModel>(reg.render(rs, "aggregate_count", {{"property", p}}, ctx));
    std::size_t sum = 0, present = 0;
    for (const auto& [k, n] : a.counts) sum += static_cast<std::size_t>(n);
    for (const auto& o : rs.items) present += o.value(p).is_missing() ? 0 : 1;
    require(sum == present, "aggregate counts do not sum to the items with a value");
  }
  return "500 random result sets: rows = items, groups partition, counts sum";
}

std::string performance_check(const std::string& base, Fetcher& f) {
  auto spec = fixtures::fixture_spec(Mode::form_reload, base, true);
  EngineOptions opts;
  opts.enrich = true;
  auto start = Clock::now();
  auto out = execute(spec, SearchQuery{"borges", {}, {}, 1}, f, opts);
  double t = seconds_since(start);
  require(out.results.items.size() == fixtures::ground_truth("borges").size(), "wrong result count");
  for (const auto& o : out.results.items) require(!o.value("bibtex").is_missing(), "enrichment incomplete");
  require(t < 1.0, "took " + std::to_string(t) + " s");
  return "search + enrichment of " + std::to_string(out.results.items.size()) + " items in " + std::to_string(t) + " s";
}

}  // namespace

int main() {
  fixtures::FixtureServer server;
  server.start(0);
  std::string base = server.base_url();
  HttpFetcher fetcher;

  criterion("klm-table1", klm_check);
  criterion("strategy-detection", [&] { return detection_check(base, fetcher); });
  criterion("extraction-oracle", [&] { return oracle_check(base, fetcher); });
  criterion("pagination", [&] { return pagination_check(base, fetcher); });
  criterion("in-target-enrichment", [&] { return enrichment_check(server, fetcher); });
  criterion("round-trips", roundtrip_check);
  criterion("visualizer-conservation", visualizer_check);
  criterion("end-to-end-performance", [&] { return performance_check(base, fetcher); });

  server.stop();
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures;
}
