#include "svc/fixtures.hpp"

#include <httplib.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "svc/error.hpp"
#include "svc/html.hpp"
#include "svc/url.hpp"

namespace svc::fixtures {

extern const std::string_view kBooksJson;

namespace {

using nlohmann::json;

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string bibtex_of(const Book& b) {
  std::string surname = b.author.substr(b.author.rfind(' ') + 1);
  std::string key = lower_ascii(surname) + std::to_string(b.year);
  key.erase(std::remove_if(key.begin(), key.end(), [](char c) { return static_cast<unsigned char>(c) >= 0x80; }),
            key.end());
  return "@book{" + key + ",\n  title = {" + b.title + "},\n  author = {" + b.author + "},\n  year = {" +
         std::to_string(b.year) + "},\n  note = {" + b.venue + "}\n}";
}

std::vector<Book> load_dataset() {
  json doc = json::parse(kBooksJson);
  std::vector<Book> out;
  for (const auto& j : doc.at("books")) {
    Book b;
    b.id = j.at("id").get<int>();
    b.title = j.at("title").get<std::string>();
    b.author = j.at("author").get<std::string>();
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.1f", j.at("rating").get<double>());
    b.rating = buf;
    b.venue = j.at("venue").get<std::string>();
    b.year = j.at("year").get<int>();
    b.description = j.at("description").get<std::string>();
    b.bibtex = bibtex_of(b);
    out.push_back(std::move(b));
  }
  return out;
}

std::string esc(std::string_view s) { return html::escape_text(s); }
std::string attr(std::string_view s) { return html::escape_attribute(s); }

struct Params {
  std::string q;
  std::optional<std::string> venue;
  std::optional<std::string> sort;
  int page = 1;
};

Params read_params(const httplib::Request& req) {
  Params p;
  if (req.has_param("q")) p.q = req.get_param_value("q");
  if (req.has_param("venue") && !req.get_param_value("venue").empty()) p.venue = req.get_param_value("venue");
  if (req.has_param("sort") && !req.get_param_value("sort").empty()) p.sort = req.get_param_value("sort");
  if (req.has_param("page")) {
    try {
      p.page = std::max(1, std::stoi(req.get_param_value("page")));
    } catch (...) {
      p.page = 1;
    }
  }
  return p;
}

std::string link(std::string_view path, const Params& p, int page, std::optional<std::string> venue,
                 std::optional<std::string> sort) {
  std::vector<url::Param> params{{"q", p.q}};
  if (venue) params.emplace_back("venue", *venue);
  if (sort) params.emplace_back("sort", *sort);
  if (page > 1) params.emplace_back("page", std::to_string(page));
  return std::string(path) + "?" + url::encode_params(params);
}

std::string controls(std::string_view path, const Params& p) {
  std::string out = "<nav class=\"filters\">";
  out += "<a class=\"filter\" href=\"" + attr(link(path, p, 1, "journal", p.sort)) + "\">Journal only</a> ";
  out += "<a class=\"filter\" href=\"" + attr(link(path, p, 1, "conference", p.sort)) + "\">Conference only</a>";
  out += "</nav>\n<nav class=\"orderings\">";
  out += "<a class=\"ordering\" href=\"" + attr(link(path, p, 1, p.venue, "rating")) + "\">By rating</a> ";
  out += "<a class=\"ordering\" href=\"" + attr(link(path, p, 1, p.venue, "year")) + "\">By year</a>";
  out += "</nav>\n";
  return out;
}

struct Page {
  std::vector<Book> items;
  std::size_t total = 0;
  bool has_next = false;
};

Page page_of(const Params& p) {
  auto all = ground_truth(p.q, p.venue, p.sort);
  Page out;
  out.total = all.size();
  std::size_t start = static_cast<std::size_t>(p.page - 1) * kPageSize;
  for (std::size_t i = start; i < all.size() && i < start + kPageSize; ++i) out.items.push_back(all[i]);
  out.has_next = start + kPageSize < all.size();
  return out;
}

std::string result_list(const Page& page) {
  std::string out = "<ul class=\"results\">\n";
  for (const auto& b : page.items) {
    out += "  <li class=\"result\"><a class=\"title\" href=\"/book/" + std::to_string(b.id) + "\">" + esc(b.title) +
           "</a>\n    <span class=\"author\">" + esc(b.author) + "</span>\n    <span class=\"rating\">" + b.rating +
           "</span> <span class=\"venue\">" + b.venue + "</span></li>\n";
  }
  out += "</ul>\n";
  return out;
}

std::string pager(std::string_view path, const Params& p, const Page& page) {
  std::string out = "<div class=\"pager\">";
  if (p.page > 1) out += "<a class=\"prev\" href=\"" + attr(link(path, p, p.page - 1, p.venue, p.sort)) + "\">Previous</a> ";
  if (page.has_next) out += "<a class=\"next\" href=\"" + attr(link(path, p, p.page + 1, p.venue, p.sort)) + "\">Next</a>";
  out += "</div>\n";
  return out;
}

std::string document(std::string_view title, std::string_view body) {
  return "<!DOCTYPE html>\n<html>\n<head><meta charset=\"utf-8\"><title>" + esc(title) +
         "</title></head>\n<body>\n" + std::string(body) + "</body>\n</html>\n";
}

std::string search_box_form(std::string_view action, const Params& p) {
  return "<form id=\"search\" action=\"" + std::string(action) +
         "\" method=\"get\">\n  <input type=\"hidden\" name=\"ref\" value=\"home\">\n"
         "  <input type=\"text\" id=\"q\" name=\"q\" value=\"" + attr(p.q) +
         "\">\n  <button id=\"go\" type=\"submit\">Search</button>\n</form>\n";
}

std::string results_body(std::string_view path, const Params& p) {
  Page page = page_of(p);
  std::string out = "<p class=\"summary\">" + std::to_string(page.total) + " books</p>\n";
  out += controls(path, p);
  out += result_list(page);
  out += pager(path, p, page);
  return out;
}

void html_reply(httplib::Response& res, const std::string& body, int status = 200) {
  res.status = status;
  res.set_content(body, "text/html; charset=utf-8");
}

}  // namespace

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::form_reload: return "form_reload";
    case Mode::ajax_fragment: return "ajax_fragment";
    case Mode::keystroke_ajax: return "keystroke_ajax";
    case Mode::infinite_scroll: return "infinite_scroll";
    case Mode::formless: return "formless";
  }
  return "form_reload";
}

std::string_view path_of(Mode mode) {
  switch (mode) {
    case Mode::form_reload: return "/form/";
    case Mode::ajax_fragment: return "/ajax/";
    case Mode::keystroke_ajax: return "/keys/";
    case Mode::infinite_scroll: return "/scroll/";
    case Mode::formless: return "/plain/";
  }
  return "/form/";
}

std::optional<Mode> mode_from(std::string_view name) {
  for (Mode m : {Mode::form_reload, Mode::ajax_fragment, Mode::keystroke_ajax, Mode::infinite_scroll, Mode::formless})
    if (to_string(m) == name) return m;
  return std::nullopt;
}

std::optional<StrategyVariant> expected_variant(Mode mode) {
  switch (mode) {
    case Mode::form_reload:
    case Mode::formless: return StrategyVariant::write_and_click_to_reload;
    case Mode::ajax_fragment: return StrategyVariant::write_and_click_for_ajax_call;
    case Mode::keystroke_ajax: return StrategyVariant::write_for_ajax_call;
    case Mode::infinite_scroll: return std::nullopt;
  }
  return std::nullopt;
}

const std::vector<Book>& dataset() {
  static const std::vector<Book> books = load_dataset();
  return books;
}

std::vector<Book> ground_truth(std::string_view keywords, const std::optional<std::string>& venue,
                               const std::optional<std::string>& sort) {
  std::string needle = lower_ascii(keywords);
  std::vector<Book> out;
  for (const auto& b : dataset()) {
    bool hit = needle.empty() || lower_ascii(b.title).find(needle) != std::string::npos ||
               lower_ascii(b.author).find(needle) != std::string::npos;
    if (hit && venue && b.venue != *venue) hit = false;
    if (hit) out.push_back(b);
  }
  if (sort && *sort == "rating") {
    std::stable_sort(out.begin(), out.end(), [](const Book& a, const Book& b) {
      double x = std::stod(a.rating), y = std::stod(b.rating);
      return x != y ? x > y : a.id < b.id;
    });
  } else if (sort && *sort == "year") {
    std::stable_sort(out.begin(), out.end(),
                     [](const Book& a, const Book& b) { return a.year != b.year ? a.year < b.year : a.id < b.id; });
  }
  return out;
}

struct FixtureServer::Impl {
  httplib::Server server;
  std::thread thread;
  int port = 0;
  std::mutex mutex;
  std::set<int> missing;
  std::atomic<std::size_t> requests{0};

  void routes() {
    server.set_pre_routing_handler([this](const httplib::Request&, httplib::Response&) {
      ++requests;
      return httplib::Server::HandlerResponse::Unhandled;
    });

    server.Get("/", [](const httplib::Request&, httplib::Response& res) {
      std::string body = "<h1>Fixture engines</h1>\n<ul>\n";
      for (Mode m : {Mode::form_reload, Mode::ajax_fragment, Mode::keystroke_ajax, Mode::infinite_scroll, Mode::formless})
        body += "  <li><a href=\"" + std::string(path_of(m)) + "\">" + std::string(to_string(m)) + "</a></li>\n";
      body += "  <li><a href=\"/jsonapi?q=\">jsonapi</a></li>\n</ul>\n";
      html_reply(res, document("Fixture engines", body));
    });

    server.Get("/form/", [](const httplib::Request& req, httplib::Response& res) {
      Params p = read_params(req);
      html_reply(res, document("Books: form search", "<h1>Book search</h1>\n" + search_box_form("/form/search", p)));
    });
    server.Get("/form/search", [](const httplib::Request& req, httplib::Response& res) {
      Params p = read_params(req);
      html_reply(res, document("Books: results", "<h1>Book search</h1>\n" + search_box_form("/form/search", p) +
                                                     results_body("/form/search", p)));
    });

    server.Get("/ajax/", [](const httplib::Request& req, httplib::Response& res) {
      Params p = read_params(req);
      std::string body =
          "<h1>Book search</h1>\n<div class=\"searchbox\">\n  <input type=\"text\" id=\"q\" name=\"q\" value=\"" +
          attr(p.q) +
          "\">\n  <button id=\"go\" type=\"button\" data-endpoint=\"/api/search?q={query}&amp;page={page}\">"
          "Search</button>\n</div>\n<div id=\"results\"></div>\n"
          "<script src=\"/static/ajax.js\"></script>\n";
      html_reply(res, document("Books: ajax search", body));
    });
    server.Get("/api/search", [](const httplib::Request& req, httplib::Response& res) {
      Params p = read_params(req);
      html_reply(res, results_body("/api/search", p));
    });

    server.Get("/keys/", [](const httplib::Request& req, httplib::Response& res) {
      Params p = read_params(req);
      std::string body =
          "<h1>Book search</h1>\n<input type=\"search\" id=\"q\" name=\"q\" value=\"" + attr(p.q) +
          "\" hx-get=\"/keys/api/search?q={query}&amp;page={page}\" hx-trigger=\"keyup changed delay:300ms\" "
          "hx-target=\"#results\">\n<div id=\"results\"></div>\n";
      html_reply(res, document("Books: search as you type", body));
    });
    server.Get("/keys/api/search", [](const httplib::Request& req, httplib::Response& res) {
      Params p = read_params(req);
      html_reply(res, document("Books: results", results_body("/keys/api/search", p)));
    });

    server.Get("/scroll/", [](const httplib::Request& req, httplib::Response& res) {
      Params p = read_params(req);
      html_reply(res, document("Books: endless", "<h1>Book search</h1>\n" + search_box_form("/scroll/search", p)));
    });
    server.Get("/scroll/search", [](const httplib::Request& req, httplib::Response& res) {
      Params p = read_params(req);
      std::string body = "<h1>Book search</h1>\n" + search_box_form("/scroll/search", p) +
                         "<ul class=\"results\"></ul>\n<div class=\"sentinel\"></div>\n"
                         "<script>window.addEventListener('scroll', function () { loadMore(); });</script>\n";
      html_reply(res, document("Books: endless", body));
    });

    server.Get("/plain/", [](const httplib::Request& req, httplib::Response& res) {
      Params p = read_params(req);
      std::string body = "<h1>Book search</h1>\n<div class=\"searchbox\">\n  <input type=\"text\" id=\"q\" name=\"q\" value=\"" +
                         attr(p.q) + "\">\n  <button id=\"go\" type=\"button\">Search</button>\n</div>\n";
      if (req.has_param("q")) body += results_body("/plain/", p);
      html_reply(res, document("Books: plain search", body));
    });

    server.Get(R"(/book/(\d+))", [this](const httplib::Request& req, httplib::Response& res) {
      int id = std::stoi(req.matches[1]);
      {
        std::lock_guard lock(mutex);
        if (missing.count(id)) return html_reply(res, document("Not found", "<p>No such book.</p>\n"), 404);
      }
      const auto& books = dataset();
      auto it = std::find_if(books.begin(), books.end(), [&](const Book& b) { return b.id == id; });
      if (it == books.end()) return html_reply(res, document("Not found", "<p>No such book.</p>\n"), 404);
      std::string body = "<article class=\"book\">\n<h1 class=\"title\">" + esc(it->title) +
                         "</h1>\n<p class=\"byline\">by <span class=\"author\">" + esc(it->author) +
                         "</span>, " + std::to_string(it->year) + "</p>\n<p class=\"description\">" +
                         esc(it->description) + "</p>\n<pre class=\"bibtex\">" + esc(it->bibtex) +
                         "</pre>\n</article>\n";
      html_reply(res, document(it->title, body));
    });

    server.Get("/jsonapi", [](const httplib::Request& req, httplib::Response& res) {
      Params p = read_params(req);
      Page page = page_of(p);
      json items = json::array();
      for (const auto& b : page.items)
        items.push_back({{"url", "/book/" + std::to_string(b.id)},
                         {"title", b.title},
                         {"author", b.author},
                         {"rating", b.rating},
                         {"venue", b.venue},
                         {"year", b.year}});
      json body = {{"total", page.total}, {"page", p.page}, {"page_size", kPageSize}, {"items", items}};
      res.set_content(body.dump(), "application/json");
    });
  }
};

FixtureServer::FixtureServer() : impl_(std::make_unique<Impl>()) { impl_->routes(); }

FixtureServer::~FixtureServer() { stop(); }

void FixtureServer::start(int port) {
  if (impl_->thread.joinable()) throw Error(Errc::invalid_argument, "fixture server already running");
  if (port == 0) {
    impl_->port = impl_->server.bind_to_any_port("127.0.0.1");
    if (impl_->port <= 0) throw Error(Errc::port_in_use, "could not bind a free port");
  } else {
    if (!impl_->server.bind_to_port("127.0.0.1", port))
      throw Error(Errc::port_in_use, "port " + std::to_string(port) + " is in use");
    impl_->port = port;
  }
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void FixtureServer::stop() {
  if (!impl_->thread.joinable()) return;
  impl_->server.stop();
  impl_->thread.join();
}

void FixtureServer::wait() {
  if (impl_->thread.joinable()) impl_->thread.join();
}

int FixtureServer::port() const { return impl_->port; }

std::string FixtureServer::base_url() const { return "http://127.0.0.1:" + std::to_string(impl_->port); }

void FixtureServer::set_missing_details(std::set<int> ids) {
  std::lock_guard lock(impl_->mutex);
  impl_->missing = std::move(ids);
}

std::size_t FixtureServer::request_count() const { return impl_->requests.load(); }

std::string book_url(const std::string& base_url, int id) { return base_url + "/book/" + std::to_string(id); }

namespace {

ServiceSpec book_spec(const std::string& id, const std::string& name, const std::string& page_url) {
  ServiceSpec s;
  s.id = id;
  s.name = name;
  s.binding.search_page_url = page_url;
  s.binding.input = Selector::css("#q");
  s.binding.trigger = Selector::css("#go");
  s.binding.next_page = Selector::css("a.next");
  s.binding.prev_page = Selector::css("a.prev");

  auto& r = s.result_spec;
  r.type_name = "Book";
  r.container = Selector::css("li.result", true);
  r.target_url = PropertySpec{"target_url", PropertyLocation::in_result, Selector::css("a.title"), ExtractRule::attr("href")};
  r.properties = {
      {"title", PropertyLocation::in_result, Selector::css("a.title"), ExtractRule::text()},
      {"author", PropertyLocation::in_result, Selector::css("span.author"), ExtractRule::text()},
      {"rating", PropertyLocation::in_result, Selector::css("span.rating"), ExtractRule::text()},
      {"venue", PropertyLocation::in_result, Selector::css("span.venue"), ExtractRule::text()},
      {"bibtex", PropertyLocation::in_target, Selector::css("pre.bibtex"), ExtractRule::text()},
  };

  ConditionGroup venue{"Venue", true, {}};
  venue.conditions.push_back({"Journal only", ParamSet{{{"venue", "journal"}}}});
  venue.conditions.push_back({"Conference only", ParamSet{{{"venue", "conference"}}}});
  s.filters.groups.push_back(venue);

  s.orderings = {
      {"By rating", RemoteOrdering{ParamSet{{{"sort", "rating"}}}}},
      {"By year", RemoteOrdering{ParamSet{{{"sort", "year"}}}}},
      {"Title (A-Z)", LocalOrdering{"title", SortDirection::asc, SortComparator::lexical}},
      {"Rating (local)", LocalOrdering{"rating", SortDirection::desc, SortComparator::numeric}},
  };
  s.metadata.tags = {"fixture", "books"};
  s.metadata.created = "2016-12-01T00:00:00Z";
  return s;
}

}  // namespace

ServiceSpec fixture_spec(Mode mode, const std::string& base_url, bool with_strategy) {
  std::string name(to_string(mode));
  ServiceSpec s = book_spec("fixture-" + name, "Fixture books (" + name + ")", base_url + std::string(path_of(mode)));
  if (mode == Mode::keystroke_ajax) s.binding.trigger.reset();
  if (!with_strategy) return s;

  StrategyConfig st;
  switch (mode) {
    case Mode::form_reload:
    case Mode::formless:
      st.variant = StrategyVariant::write_and_click_to_reload;
      break;
    case Mode::ajax_fragment:
      st.variant = StrategyVariant::write_and_click_for_ajax_call;
      st.request_template = RequestTemplate{HttpMethod::get, base_url + "/api/search?q={query}&page={page}", {},
                                            ResponseKind::html_fragment};
      break;
    case Mode::keystroke_ajax:
      st.variant = StrategyVariant::write_for_ajax_call;
      st.request_template = RequestTemplate{HttpMethod::get, base_url + "/keys/api/search?q={query}&page={page}", {},
                                            ResponseKind::full_document};
      break;
    case Mode::infinite_scroll:
      return s;
  }
  s.strategy = st;
  return s;
}

ServiceSpec fixture_json_spec(const std::string& base_url) {
  ServiceSpec s = book_spec("fixture-jsonapi", "Fixture books (JSON API)", base_url + "/jsonapi");
  s.binding.trigger.reset();
  s.binding.next_page.reset();
  s.binding.prev_page.reset();
  StrategyConfig st;
  st.variant = StrategyVariant::api_based;
  st.provider_id = "fixture-json";
  s.strategy = st;
  return s;
}

}  // namespace svc::fixtures
