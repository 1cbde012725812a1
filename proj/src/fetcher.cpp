#include "svc/fetcher.hpp"

#include <httplib.h>

#include <condition_variable>
#include <thread>

#include "svc/error.hpp"
#include "svc/url.hpp"

namespace svc {

std::string HttpRequestPlan::target_url() const {
  if (method == HttpMethod::post || params.empty()) return url;
  return url::with_params(url, params);
}

std::string HttpRequestPlan::body() const {
  if (method == HttpMethod::get) return {};
  return url::encode_params(params);
}

std::string HttpRequestPlan::describe() const {
  std::string out = std::string(method == HttpMethod::get ? "GET " : "POST ") + url + "\n";
  for (const auto& [n, v] : params) out += "  " + n + "=" + v + "\n";
  for (const auto& [n, v] : headers) out += "  header " + n + ": " + v + "\n";
  return out;
}

HttpRequestPlan get_plan(std::string target) {
  HttpRequestPlan plan;
  auto [base, params] = url::split_query(target);
  plan.url = std::move(base);
  plan.params = std::move(params);
  return plan;
}

namespace {

class Semaphore {
 public:
  explicit Semaphore(int count) : count_(count < 1 ? 1 : count) {}
  void acquire() {
    std::unique_lock lock(mutex_);
    cv_.wait(lock, [&] { return count_ > 0; });
    --count_;
  }
  void release() {
    {
      std::lock_guard lock(mutex_);
      ++count_;
    }
    cv_.notify_one();
  }

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  int count_;
};

}  // namespace

struct HttpFetcher::State {
  explicit State(int parallel) : slots(parallel) {}
  Semaphore slots;
  std::mutex spacing_mutex;
  std::map<std::string, std::chrono::steady_clock::time_point> next_allowed;
};

HttpFetcher::HttpFetcher(FetcherConfig config)
    : config_(std::move(config)), state_(std::make_unique<State>(config_.max_parallel)) {}

HttpFetcher::~HttpFetcher() = default;

FetchResponse HttpFetcher::fetch(const HttpRequestPlan& plan) {
  state_->slots.acquire();
  struct Release {
    Semaphore& s;
    ~Release() { s.release(); }
  } release{state_->slots};

  HttpMethod method = plan.method;
  std::string current = plan.target_url();
  std::string body = plan.body();

  for (int hop = 0;; ++hop) {
    if (!url::is_absolute_http(current)) throw Error(Errc::fetch_failed, "not an http(s) URL: " + current);
    url::Url u = url::parse(current);

    std::string host = u.host();
    bool loopback = host == "127.0.0.1" || host == "localhost" || host == "[::1]";
    if (config_.host_spacing.count() > 0 && !(loopback && config_.exempt_loopback)) {
      std::chrono::steady_clock::time_point wait_until;
      {
        std::lock_guard lock(state_->spacing_mutex);
        auto now = std::chrono::steady_clock::now();
        auto& slot = state_->next_allowed[u.origin()];
        wait_until = std::max(slot, now);
        slot = wait_until + config_.host_spacing;
      }
      std::this_thread::sleep_until(wait_until);
    }

    httplib::Client client(u.origin());
    auto seconds = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
    auto micros = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - seconds);
    client.set_connection_timeout(seconds.count(), micros.count());
    client.set_read_timeout(seconds.count(), micros.count());
    client.set_write_timeout(seconds.count(), micros.count());
    client.set_follow_location(false);

    httplib::Headers headers{{"User-Agent", config_.user_agent}};
    for (const auto& [n, v] : plan.headers) headers.emplace(n, v);

    std::string path = u.path_and_query();
    if (path.empty()) path = "/";
    httplib::Result res = method == HttpMethod::get
                              ? client.Get(path, headers)
                              : client.Post(path, headers, body, "application/x-www-form-urlencoded");
    if (!res) throw Error(Errc::fetch_failed, "request to " + current + " failed: " + httplib::to_string(res.error()));

    int status = res->status;
    if (status >= 300 && status < 400 && res->has_header("Location")) {
      if (hop >= config_.max_redirects)
        throw Error(Errc::fetch_failed, "too many redirects fetching " + plan.target_url());
      current = url::resolve(current, res->get_header_value("Location"));
      if (status == 303 || ((status == 301 || status == 302) && method == HttpMethod::post)) {
        method = HttpMethod::get;
        body.clear();
      }
      continue;
    }

    FetchResponse out;
    out.status = status;
    out.final_url = current;
    out.body = std::move(res->body);
    out.content_type = res->get_header_value("Content-Type");
    return out;
  }
}

void StaticFetcher::add(std::string target, std::string body, int status, std::string content_type) {
  std::lock_guard lock(mutex_);
  FetchResponse r;
  r.status = status;
  r.final_url = target;
  r.body = std::move(body);
  r.content_type = std::move(content_type);
  pages_[std::move(target)] = std::move(r);
}

FetchResponse StaticFetcher::fetch(const HttpRequestPlan& plan) {
  {
    std::lock_guard lock(mutex_);
    log_.push_back(plan);
  }
  if (handler_) {
    if (auto r = handler_(plan)) return *r;
  }
  std::lock_guard lock(mutex_);
  auto it = pages_.find(plan.target_url());
  if (it != pages_.end()) return it->second;
  FetchResponse missing;
  missing.status = 404;
  missing.final_url = plan.target_url();
  missing.body = "<html><body>not found</body></html>";
  return missing;
}

std::vector<HttpRequestPlan> StaticFetcher::requests() const {
  std::lock_guard lock(mutex_);
  return log_;
}

}  // namespace svc
