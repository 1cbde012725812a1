#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "svc/fetcher.hpp"
#include "svc/html.hpp"

namespace svc {

/// A fetched page with scripts and event handlers removed. `handle` is parsed
/// from sanitized_html so node paths picked on it resolve in the handle.
struct DocumentSnapshot {
  std::string snapshot_id;
  std::string url;
  std::string fetched_at;
  std::string sanitized_html;
  html::DocumentHandle handle;
};

class SnapshotCache {
 public:
  using Clock = std::function<std::chrono::steady_clock::time_point()>;

  explicit SnapshotCache(std::chrono::seconds ttl = std::chrono::minutes(30), Clock clock = {});

  std::shared_ptr<const DocumentSnapshot> add(const std::string& url, const std::string& body);
  /// Throws Error(Errc::not_found) for unknown or expired ids.
  std::shared_ptr<const DocumentSnapshot> get(const std::string& id);
  std::size_t size();

 private:
  void purge_locked(std::chrono::steady_clock::time_point now);

  struct Entry {
    std::shared_ptr<const DocumentSnapshot> snapshot;
    std::chrono::steady_clock::time_point expires;
  };
  std::chrono::seconds ttl_;
  Clock clock_;
  std::mutex mutex_;
  std::map<std::string, Entry> entries_;
};

/// Fetches `url` and stores the sanitized page. Throws fetch-failed.
std::shared_ptr<const DocumentSnapshot> take_snapshot(Fetcher& fetcher, const std::string& url, SnapshotCache& cache);

}  // namespace svc
