#include "svc/api.hpp"

#include <httplib.h>

#include <thread>

#include "svc/engine.hpp"
#include "svc/klm.hpp"
#include "svc/selector.hpp"
#include "svc/snapshot.hpp"
#include "svc/wire.hpp"

namespace svc {

namespace {

void send(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(dump_canonical(body), "application/json");
}

void send_text(httplib::Response& res, int status, const std::string& body) {
  res.status = status;
  res.set_content(body, "application/json");
}

json body_of(const httplib::Request& req) {
  if (req.body.empty()) throw Error(Errc::parse_error, "request body is empty");
  return parse_json(req.body);
}

std::string slug(std::string_view name) {
  std::string out;
  for (char c : name) {
    if (std::isalnum(static_cast<unsigned char>(c))) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    else if (!out.empty() && out.back() != '-') out += '-';
  }
  while (!out.empty() && out.back() == '-') out.pop_back();
  return out.empty() ? "service" : out;
}

NodePath node_path_of(const json& j) {
  if (!j.is_array()) throw Error(Errc::parse_error, "node_path: expected an array of child indices");
  NodePath p;
  for (const auto& step : j) {
    if (!step.is_number_integer() || step.get<long long>() < 0)
      throw Error(Errc::parse_error, "node_path: indices must be non-negative integers");
    p.steps.push_back(step.get<std::size_t>());
  }
  return p;
}

}  // namespace

struct ApiServer::Impl {
  Impl(SpecStore& s, Fetcher& f, ApiConfig c) : store(s), fetcher(f), config(std::move(c)), snapshots(config.snapshot_ttl) {}

  SpecStore& store;
  Fetcher& fetcher;
  ApiConfig config;
  SnapshotCache snapshots;
  httplib::Server server;
  std::thread thread;
  int port = 0;
  std::mutex write_mutex;  // serializes read-modify-write sequences on the store

  EngineOptions engine_options() const {
    EngineOptions o;
    o.clock = config.clock;
    return o;
  }

  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  Handler guarded(Handler h) {
    return [h = std::move(h)](const httplib::Request& req, httplib::Response& res) {
      try {
        h(req, res);
      } catch (const Error& e) {
        send(res, wire::http_status(e.code()), wire::error_json(e));
      } catch (const std::exception& e) {
        send(res, 500, {{"error", "internal-error"}, {"message", e.what()}});
      }
    };
  }

  std::string fresh_id(const std::string& base) {
    if (!store.contains(base)) return base;
    for (int n = 2;; ++n) {
      std::string id = base + "-" + std::to_string(n);
      if (!store.contains(id)) return id;
    }
  }

  void save_checked(const ServiceSpec& spec, httplib::Response& res, int status) {
    auto report = validate_spec(spec);
    if (!report.ok()) {
      json body = wire::report_json(report);
      body["error"] = "validation-error";
      body["message"] = report.summary();
      return send(res, 400, body);
    }
    store.save(spec);
    json warnings = json::array();
    for (const auto& w : report.warnings()) warnings.push_back(w.path + ": " + w.message);
    send(res, status, {{"id", spec.id}, {"warnings", warnings}});
  }

  void routes() {
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Headers", "Content-Type"},
                                {"Access-Control-Allow-Methods", "GET, POST, PUT, DELETE, OPTIONS"}});
    server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    server.Post("/fetch", guarded([this](const httplib::Request& req, httplib::Response& res) {
      json body = body_of(req);
      if (!body.is_object() || !body.contains("url") || !body["url"].is_string())
        throw Error(Errc::parse_error, "url: missing field");
      auto snap = take_snapshot(fetcher, body["url"].get<std::string>(), snapshots);
      send(res, 200, {{"snapshot_id", snap->snapshot_id}, {"url", snap->url}, {"fetched_at", snap->fetched_at},
                      {"sanitized_html", snap->sanitized_html}});
    }));

    server.Post("/selectors/suggest", guarded([this](const httplib::Request& req, httplib::Response& res) {
      json body = body_of(req);
      if (!body.is_object() || !body.contains("snapshot_id") || !body["snapshot_id"].is_string())
        throw Error(Errc::parse_error, "snapshot_id: missing field");
      if (!body.contains("node_path")) throw Error(Errc::parse_error, "node_path: missing field");
      auto snap = snapshots.get(body["snapshot_id"].get<std::string>());
      send(res, 200, wire::suggestions_json(suggest_selectors(*snap->handle, node_path_of(body["node_path"]))));
    }));

    server.Get("/services", guarded([this](const httplib::Request&, httplib::Response& res) {
      json list = json::array();
      for (const auto& s : store.list()) list.push_back(to_json(s));
      send(res, 200, {{"services", list}});
    }));

    server.Post("/services", guarded([this](const httplib::Request& req, httplib::Response& res) {
      json body = body_of(req);
      std::lock_guard lock(write_mutex);
      if (body.is_object() && (!body.contains("id") || (body["id"].is_string() && body["id"].get<std::string>().empty()))) {
        std::string name = body.contains("name") && body["name"].is_string() ? body["name"].get<std::string>() : "";
        body["id"] = fresh_id(slug(name));
      }
      if (body.is_object() && body.contains("metadata") && body["metadata"].is_object() &&
          body["metadata"].value("created", std::string()).empty())
        body["metadata"]["created"] = now_timestamp();
      ServiceSpec spec = spec_from_json(body);
      if (store.contains(spec.id)) throw Error(Errc::duplicate_id, "service '" + spec.id + "' already exists");
      save_checked(spec, res, 201);
    }));

    server.Get(R"(/services/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
      send_text(res, 200, serialize(store.load(req.matches[1])));
    }));

    server.Put(R"(/services/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
      std::string id = req.matches[1];
      json body = body_of(req);
      std::lock_guard lock(write_mutex);
      if (!store.contains(id)) throw Error(Errc::not_found, "no service with id '" + id + "'");
      if (body.is_object() && !body.contains("id")) body["id"] = id;
      ServiceSpec spec = spec_from_json(body);
      if (spec.id != id) throw Error(Errc::validation, "body id '" + spec.id + "' does not match '" + id + "'");
      save_checked(spec, res, 200);
    }));

    server.Delete(R"(/services/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard lock(write_mutex);
      store.remove(req.matches[1]);
      res.status = 204;
    }));

    server.Post(R"(/services/([^/]+)/detect-strategy)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      std::string id = req.matches[1];
      json body = body_of(req);
      if (!body.is_object() || !body.contains("probe_a") || !body.contains("probe_b") || !body["probe_a"].is_string() ||
          !body["probe_b"].is_string())
        throw Error(Errc::parse_error, "probe_a and probe_b are required strings");
      ServiceSpec spec = store.load(id);
      StrategyConfig config = detect_strategy(spec, body["probe_a"].get<std::string>(),
                                              body["probe_b"].get<std::string>(), fetcher);
      std::lock_guard lock(write_mutex);
      spec = store.load(id);
      spec.strategy = config;
      store.save(spec);
      send(res, 200, to_json(config));
    }));

    server.Post(R"(/services/([^/]+)/search)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      ServiceSpec spec = store.load(req.matches[1]);
      auto request = wire::search_request_from_json(body_of(req));
      send_text(res, 200, wire::search_output(wire::run_search(spec, request, fetcher, engine_options())));
    }));

    server.Get("/visualizers", guarded([](const httplib::Request&, httplib::Response& res) {
      json list = json::array();
      for (const auto& d : VisualizerRegistry::global().list()) list.push_back(to_json(d));
      send(res, 200, {{"visualizers", list}});
    }));

    server.Post(R"(/services/([^/]+)/render)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      ServiceSpec spec = store.load(req.matches[1]);
      auto request = wire::render_request_from_json(body_of(req));
      send_text(res, 200, wire::render_output(wire::run_render(spec, request, fetcher, engine_options())));
    }));

    server.Get(R"(/services/([^/]+)/export)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      send_text(res, 200, export_bundle({store.load(req.matches[1])}));
    }));

    server.Post("/services/import", guarded([this](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard lock(write_mutex);
      ImportResult result = import_bundle(req.body, [this](const std::string& id) { return store.contains(id); });
      for (const auto& spec : result.imported) store.save(spec);
      send(res, 200, wire::import_json(result));
    }));

    server.Post("/klm/estimate", guarded([](const httplib::Request& req, httplib::Response& res) {
      json body = body_of(req);
      if (!body.is_object() || !body.contains("scenario")) throw Error(Errc::parse_error, "scenario: missing field");
      klm::OperatorTable table = klm::table_from_json(body.value("table", json()));
      send(res, 200, klm::to_json(klm::estimate(klm::scenario_from_json(body["scenario"]), table)));
    }));

    server.Post("/klm/compare", guarded([](const httplib::Request& req, httplib::Response& res) {
      json body = body_of(req);
      if (!body.is_object() || !body.contains("a") || !body.contains("b"))
        throw Error(Errc::parse_error, "a and b scenarios are required");
      klm::OperatorTable table = klm::table_from_json(body.value("table", json()));
      send(res, 200, klm::to_json(klm::compare(klm::scenario_from_json(body["a"]), klm::scenario_from_json(body["b"]), table)));
    }));
  }
};

ApiServer::ApiServer(SpecStore& store, Fetcher& fetcher, ApiConfig config)
    : impl_(std::make_unique<Impl>(store, fetcher, std::move(config))) {
  impl_->routes();
}

ApiServer::~ApiServer() { stop(); }

void ApiServer::start(int port, const std::string& host) {
  if (impl_->thread.joinable()) throw Error(Errc::invalid_argument, "API server already running");
  if (port == 0) {
    impl_->port = impl_->server.bind_to_any_port(host);
    if (impl_->port <= 0) throw Error(Errc::port_in_use, "could not bind a free port");
  } else {
    if (!impl_->server.bind_to_port(host, port)) throw Error(Errc::port_in_use, "port " + std::to_string(port) + " is in use");
    impl_->port = port;
  }
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void ApiServer::stop() {
  if (!impl_->thread.joinable()) return;
  impl_->server.stop();
  impl_->thread.join();
}

void ApiServer::wait() {
  if (impl_->thread.joinable()) impl_->thread.join();
}

int ApiServer::port() const { return impl_->port; }

}  // namespace svc
