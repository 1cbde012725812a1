#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "svc/model.hpp"

namespace svc {

enum class BodyEncoding { none, form_urlencoded };

struct HttpRequestPlan {
  HttpMethod method = HttpMethod::get;
  std::string url;  // absolute, without query parameters from `params`
  std::vector<NameValue> params;
  std::vector<NameValue> headers;
  BodyEncoding body_encoding = BodyEncoding::none;

  /// GET: url with params appended. POST: url as is.
  std::string target_url() const;
  /// POST: the form-encoded params. GET: empty.
  std::string body() const;
  /// Multi-line text for --dry-run: "GET <url>" then one "  name=value" per param.
  std::string describe() const;

  bool operator==(const HttpRequestPlan&) const = default;
};

HttpRequestPlan get_plan(std::string url);

struct FetchResponse {
  int status = 0;
  std::string final_url;
  std::string body;
  std::string content_type;

  bool ok() const { return status >= 200 && status < 400; }
};

struct FetcherConfig {
  std::chrono::milliseconds timeout{10000};
  int max_redirects = 5;
  std::string user_agent = "svcengine/0.1 (search-service engine)";
  int max_parallel = 4;
  // Minimum gap between two requests to the same host; zero disables it.
  std::chrono::milliseconds host_spacing{100};
  // Loopback hosts (the local fixture harness) are not spaced.
  bool exempt_loopback = true;
};

/// Performs one request. Transport failures throw Error(Errc::fetch_failed);
/// HTTP error statuses are returned, not thrown.
class Fetcher {
 public:
  virtual ~Fetcher() = default;
  virtual FetchResponse fetch(const HttpRequestPlan& plan) = 0;
  virtual const FetcherConfig& config() const = 0;
};

class HttpFetcher : public Fetcher {
 public:
  explicit HttpFetcher(FetcherConfig config = {});
  ~HttpFetcher() override;

  FetchResponse fetch(const HttpRequestPlan& plan) override;
  const FetcherConfig& config() const override { return config_; }

 private:
  struct State;
  FetcherConfig config_;
  std::unique_ptr<State> state_;
};

/// Serves canned responses keyed by target_url(); unknown URLs get a 404.
/// A handler, when set, is consulted first.
class StaticFetcher : public Fetcher {
 public:
  using Handler = std::function<std::optional<FetchResponse>(const HttpRequestPlan&)>;

  void add(std::string url, std::string body, int status = 200,
           std::string content_type = "text/html; charset=utf-8");
  void set_handler(Handler handler) { handler_ = std::move(handler); }

  FetchResponse fetch(const HttpRequestPlan& plan) override;
  const FetcherConfig& config() const override { return config_; }
  FetcherConfig& mutable_config() { return config_; }

  std::vector<HttpRequestPlan> requests() const;

 private:
  FetcherConfig config_;
  std::map<std::string, FetchResponse> pages_;
  Handler handler_;
  mutable std::mutex mutex_;
  std::vector<HttpRequestPlan> log_;
};

}  // namespace svc
