#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <string>

#include "svc/fetcher.hpp"
#include "svc/store.hpp"

namespace svc {

struct ApiConfig {
  std::chrono::seconds snapshot_ttl{std::chrono::minutes(30)};
  std::function<std::string()> clock;  // fetched_at source for search results
};

/// HTTP+JSON front end over the store and engine, used by the studio.
class ApiServer {
 public:
  ApiServer(SpecStore& store, Fetcher& fetcher, ApiConfig config = {});
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  /// Serves on a background thread; port 0 picks a free port.
  /// Throws Error(Errc::port_in_use).
  void start(int port = 0, const std::string& host = "127.0.0.1");
  void stop();
  void wait();
  int port() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace svc
