#include "svc/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "svc/api.hpp"
#include "svc/engine.hpp"
#include "svc/fixtures.hpp"
#include "svc/klm.hpp"
#include "svc/store.hpp"
#include "svc/wire.hpp"

namespace svc {

namespace {

constexpr std::size_t kCellWidth = 40;

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::not_found, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text)) throw Error(Errc::io_error, "cannot write " + path);
}

std::size_t display_width(std::string_view s) {
  std::size_t n = 0;
  for (char c : s)
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
  return n;
}

std::string truncate_cell(const std::string& s) {
  if (display_width(s) <= kCellWidth) return s;
  std::string out;
  std::size_t n = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    bool lead = (static_cast<unsigned char>(s[i]) & 0xC0) != 0x80;
    if (lead && ++n > kCellWidth - 1) break;
    out += s[i];
  }
  return out + "\xE2\x80\xA6";
}

std::string pad(const std::string& s, std::size_t width) {
  std::size_t w = display_width(s);
  return w >= width ? s : s + std::string(width - w, ' ');
}

std::string cell_text(const PropertyValue& v) { return v.is_missing() ? "-" : truncate_cell(v.value); }

void print_table(std::ostream& out, const TableModel& t) {
  std::vector<std::size_t> widths;
  for (const auto& c : t.columns) widths.push_back(display_width(c));
  for (const auto& row : t.rows)
    for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], display_width(cell_text(row[i])));
  auto line = [&](const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) s += (i ? "  " : "") + (i + 1 < cells.size() ? pad(cells[i], widths[i]) : cells[i]);
    out << s << "\n";
  };
  line(t.columns);
  std::vector<std::string> rule;
  for (auto w : widths) rule.emplace_back(w, '-');
  line(rule);
  for (const auto& row : t.rows) {
    std::vector<std::string> cells;
    for (const auto& v : row) cells.push_back(cell_text(v));
    line(cells);
  }
}

std::string label_of(const DomainObject& o, const std::vector<std::string>& properties) {
  for (const auto& p : properties) {
    const auto& v = o.value(p);
    if (!v.is_missing()) return truncate_cell(v.value);
  }
  return o.target_url;
}

void print_model(std::ostream& out, const PresentationModel& model, const std::vector<std::string>& properties) {
  if (const auto* t = std::get_if<TableModel>(&model)) return print_table(out, *t);
  if (const auto* g = std::get_if<GroupedModel>(&model)) {
    for (const auto& [value, items] : g->groups) {
      out << g->group_property << " = " << value << " (" << items.size() << ")\n";
      for (const auto& i : items) out << "  " << label_of(i, properties) << "\n";
    }
    if (!g->missing_group.empty()) {
      out << g->group_property << " missing (" << g->missing_group.size() << ")\n";
      for (const auto& i : g->missing_group) out << "  " << label_of(i, properties) << "\n";
    }
    return;
  }
  if (const auto* a = std::get_if<AggregateModel>(&model)) {
    std::size_t width = a->dimension.size();
    for (const auto& [v, n] : a->counts) width = std::max(width, display_width(v));
    out << pad(a->dimension, width) << "  count\n";
    for (const auto& [v, n] : a->counts) out << pad(v, width) << "  " << n << "\n";
    return;
  }
  out << dump_canonical(std::get<CustomModel>(model).data);
}

/// A service argument is either a spec file path or a store id.
ServiceSpec resolve_service(const std::string& arg, SpecStore& store) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) return deserialize(read_text(arg));
  return store.load(arg);
}

json parse_option_value(const std::string& raw) {
  try {
    return json::parse(raw);
  } catch (const json::exception&) {
    return raw;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const CliContext& context) {
  auto env = [&](const std::string& name) -> std::optional<std::string> {
    if (context.env) return context.env(name);
    const char* v = std::getenv(name.c_str());
    return v ? std::optional<std::string>(v) : std::nullopt;
  };

  CLI::App app{"Search Service engine", "svc"};
  app.require_subcommand(1);
  std::string store_dir = env("SVC_STORE_DIR").value_or("specs");
  app.add_option("--store-dir", store_dir, "Directory holding *.svcspec.json files (env SVC_STORE_DIR)");

  // svc list | show | validate | import | export
  auto* list_cmd = app.add_subcommand("list", "List stored services");
  auto* show_cmd = app.add_subcommand("show", "Print a stored service definition");
  std::string show_id;
  show_cmd->add_option("id", show_id)->required();

  auto* validate_cmd = app.add_subcommand("validate", "Validate a spec file or stored service");
  std::string validate_target;
  validate_cmd->add_option("target", validate_target, "Spec file or store id")->required();

  auto* import_cmd = app.add_subcommand("import", "Import a bundle or spec file into the store");
  std::string import_file;
  import_cmd->add_option("file", import_file)->required();

  auto* export_cmd = app.add_subcommand("export", "Export stored services as a bundle");
  std::vector<std::string> export_ids;
  std::string export_out;
  export_cmd->add_option("ids", export_ids, "Service ids (default: all)");
  export_cmd->add_option("-o,--output", export_out, "Write to a file instead of stdout");

  // svc detect
  auto* detect_cmd = app.add_subcommand("detect", "Detect the execution strategy of a service");
  std::string detect_target;
  std::vector<std::string> probes;
  bool detect_save = false;
  detect_cmd->add_option("service", detect_target, "Spec file or store id")->required();
  detect_cmd->add_option("--probe", probes, "Probe keywords (exactly two)")->required()->allow_extra_args(false);
  detect_cmd->add_flag("--save", detect_save, "Store the detected strategy with the service");

  // svc search
  auto* search_cmd = app.add_subcommand("search", "Run a search");
  std::string search_target, keywords, order, viz;
  std::vector<std::string> filters, viz_options;
  int page = 1;
  bool enrich = false, as_json = false, dry_run = false;
  search_cmd->add_option("service", search_target, "Spec file or store id")->required();
  search_cmd->add_option("keywords", keywords)->required();
  search_cmd->add_option("--filter", filters, "Activate a filter condition by name");
  search_cmd->add_option("--order", order, "Ordering name");
  search_cmd->add_option("--page", page, "Result page (1-based)")->check(CLI::PositiveNumber);
  search_cmd->add_flag("--enrich", enrich, "Fetch target pages for in_target properties");
  search_cmd->add_option("--viz", viz, "Visualizer id");
  search_cmd->add_option("--viz-option", viz_options, "Visualizer option as name=value");
  search_cmd->add_flag("--json", as_json, "Print JSON");
  search_cmd->add_flag("--dry-run", dry_run, "Print the request instead of sending it");

  // svc klm
  auto* klm_cmd = app.add_subcommand("klm", "GOMS-KLM estimates");
  klm_cmd->require_subcommand(1);
  auto* estimate_cmd = klm_cmd->add_subcommand("estimate", "Estimate a scenario");
  std::string scenario_path;
  std::vector<std::string> operator_overrides;
  bool klm_json = false;
  estimate_cmd->add_option("scenario", scenario_path)->required();
  estimate_cmd->add_option("--operator", operator_overrides, "Override an operator time, e.g. K=0.2");
  estimate_cmd->add_flag("--json", klm_json);
  auto* compare_cmd = klm_cmd->add_subcommand("compare", "Compare two scenarios");
  std::string scenario_a, scenario_b;
  compare_cmd->add_option("a", scenario_a)->required();
  compare_cmd->add_option("b", scenario_b)->required();
  compare_cmd->add_option("--operator", operator_overrides);
  compare_cmd->add_flag("--json", klm_json);

  // svc serve
  auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP API");
  int serve_port = 8080;
  std::string serve_host = "127.0.0.1";
  if (auto p = env("SVC_PORT")) serve_port = std::atoi(p->c_str());
  serve_cmd->add_option("--port", serve_port);
  serve_cmd->add_option("--host", serve_host);

  // svc fixtures serve
  auto* fixtures_cmd = app.add_subcommand("fixtures", "Local fixture search engines");
  fixtures_cmd->require_subcommand(1);
  auto* fixtures_serve = fixtures_cmd->add_subcommand("serve", "Serve the fixture engines");
  int fixture_port = 8765;
  if (auto p = env("SVC_FIXTURE_PORT")) fixture_port = std::atoi(p->c_str());
  fixtures_serve->add_option("--port", fixture_port);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return 2;
  }

  std::unique_ptr<HttpFetcher> own_fetcher;
  Fetcher* fetcher = context.fetcher;
  if (!fetcher) {
    own_fetcher = std::make_unique<HttpFetcher>();
    fetcher = own_fetcher.get();
  }
  EngineOptions engine_options;
  engine_options.clock = context.clock;

  auto operator_table = [&] {
    klm::OperatorTable table = klm::OperatorTable::defaults();
    for (const auto& o : operator_overrides) {
      auto eq = o.find('=');
      if (eq == std::string::npos) throw Error(Errc::invalid_argument, "--operator expects SYMBOL=SECONDS, got " + o);
      table.times[o.substr(0, eq)] = klm::Seconds::parse(o.substr(eq + 1));
    }
    return table;
  };

  try {
    if (*klm_cmd) {
      klm::OperatorTable table = operator_table();
      if (*estimate_cmd) {
        klm::KlmScenario s = klm::load_scenario(scenario_path);
        klm::Estimate e = klm::estimate(s, table);
        if (klm_json) {
          out << dump_canonical(klm::to_json(e));
        } else {
          for (const auto& step : e.per_step) out << pad(step.seconds.str(), 6) << "  " << step.label << "\n";
          out << "total " << e.total.str() << "\n";
        }
      } else {
        klm::Comparison c = klm::compare(klm::load_scenario(scenario_a), klm::load_scenario(scenario_b), table);
        if (klm_json) {
          out << dump_canonical(klm::to_json(c));
        } else {
          for (const auto& s : c.steps)
            out << pad(s.a ? s.a->str() : "-", 6) << "  " << pad(s.b ? s.b->str() : "-", 6) << "  "
                << pad(s.delta.str(), 6) << "  " << s.label << "\n";
          out << "total_a " << c.total_a.str() << "\ntotal_b " << c.total_b.str() << "\ndelta " << c.delta.str() << "\n";
        }
      }
      return 0;
    }

    if (*fixtures_cmd) {
      fixtures::FixtureServer server;
      server.start(fixture_port);
      out << "fixture engines on " << server.base_url() << "/" << std::endl;
      server.wait();
      return 0;
    }

    SpecStore store(store_dir);

    if (*list_cmd) {
      for (const auto& s : store.list()) out << s.id << "\t" << s.name << "\n";
      for (const auto& e : store.load_errors()) err << "warning: skipped " << e << "\n";
      return 0;
    }
    if (*show_cmd) {
      out << serialize(store.load(show_id));
      return 0;
    }
    if (*validate_cmd) {
      ServiceSpec spec = resolve_service(validate_target, store);
      auto report = validate_spec(spec);
      for (const auto& p : report.problems)
        out << (p.severity == Severity::error ? "error   " : "warning ") << p.path << ": " << p.message << "\n";
      out << (report.ok() ? "valid" : "invalid") << "\n";
      return report.ok() ? 0 : 1;
    }
    if (*import_cmd) {
      ImportResult result = import_bundle(read_text(import_file), [&](const std::string& id) { return store.contains(id); });
      for (const auto& s : result.imported) store.save(s);
      for (const auto& s : result.imported) out << "imported " << s.id << "\n";
      for (const auto& [from, to] : result.renamed) out << "renamed " << from << " -> " << to << "\n";
      for (const auto& r : result.rejected) {
        out << "rejected #" << r.index << (r.id.empty() ? "" : " (" + r.id + ")") << "\n";
        for (const auto& reason : r.reasons) out << "  " << reason << "\n";
      }
      return result.rejected.empty() ? 0 : 1;
    }
    if (*export_cmd) {
      std::vector<ServiceSpec> specs;
      if (export_ids.empty()) specs = store.list();
      for (const auto& id : export_ids) specs.push_back(store.load(id));
      std::string bundle = export_bundle(specs);
      if (export_out.empty()) out << bundle;
      else write_text(export_out, bundle);
      return 0;
    }
    if (*detect_cmd) {
      if (probes.size() != 2 || probes[0] == probes[1]) {
        err << "usage error: detect needs exactly two distinct --probe values\n";
        return 2;
      }
      ServiceSpec spec = resolve_service(detect_target, store);
      StrategyConfig config = detect_strategy(spec, probes[0], probes[1], *fetcher);
      out << dump_canonical(to_json(config));
      if (detect_save) {
        spec.strategy = config;
        store.save(spec);
      }
      return 0;
    }
    if (*search_cmd) {
      ServiceSpec spec = resolve_service(search_target, store);
      wire::SearchRequest request;
      request.query.keywords = keywords;
      request.query.active_filters = filters;
      if (!order.empty()) request.query.active_ordering = order;
      request.query.page = page;
      request.enrich = enrich;

      if (dry_run) {
        HttpRequestPlan plan = plan_request(spec, request.query, *fetcher);
        out << plan.describe();
        if (page > 1) {
          SearchQuery first = request.query;
          first.page = 1;
          if (plan_request(spec, first, *fetcher) == plan)
            out << "# page " << page << " is reached by following next-page links from this request\n";
        }
        return 0;
      }
      std::vector<std::string> properties;
      for (const auto& p : spec.result_spec.properties) properties.push_back(p.name);

      if (viz.empty() && viz_options.empty()) {
        ResultSet rs = wire::run_search(spec, request, *fetcher, engine_options);
        if (as_json) {
          out << wire::search_output(rs);
        } else {
          RenderContext ctx{properties};
          print_model(out, VisualizerRegistry::global().render(rs, "", json::object(), ctx), properties);
          out << rs.items.size() << " results, page " << rs.page.page << (rs.page.has_next ? " (more available)" : "") << "\n";
        }
        return 0;
      }
      wire::RenderRequest render;
      render.search = request;
      render.visualizer_id = viz;
      for (const auto& o : viz_options) {
        auto eq = o.find('=');
        if (eq == std::string::npos) throw Error(Errc::invalid_argument, "--viz-option expects name=value, got " + o);
        render.options[o.substr(0, eq)] = parse_option_value(o.substr(eq + 1));
      }
      PresentationModel model = wire::run_render(spec, render, *fetcher, engine_options);
      if (as_json) out << wire::render_output(model);
      else print_model(out, model, properties);
      return 0;
    }
    if (*serve_cmd) {
      ApiConfig config;
      config.clock = context.clock;
      ApiServer server(store, *fetcher, config);
      server.start(serve_port, serve_host);
      out << "API on http://" << serve_host << ":" << server.port() << "/ (store " << store.root().string() << ")"
          << std::endl;
      server.wait();
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.name() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace svc
