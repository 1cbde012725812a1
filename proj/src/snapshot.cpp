#include "svc/snapshot.hpp"

#include <random>

#include "svc/error.hpp"
#include "svc/model.hpp"
#include "svc/url.hpp"

namespace svc {

namespace {

std::string random_id() {
  static std::mutex mutex;
  static std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(mutex);
  static const char* hex = "0123456789abcdef";
  std::uint64_t v = rng();
  std::string out;
  for (int i = 0; i < 16; ++i) {
    out += hex[v & 0xF];
    v >>= 4;
  }
  return out;
}

}  // namespace

SnapshotCache::SnapshotCache(std::chrono::seconds ttl, Clock clock) : ttl_(ttl), clock_(std::move(clock)) {
  if (!clock_) clock_ = [] { return std::chrono::steady_clock::now(); };
}

std::shared_ptr<const DocumentSnapshot> SnapshotCache::add(const std::string& page_url, const std::string& body) {
  auto snap = std::make_shared<DocumentSnapshot>();
  snap->snapshot_id = random_id();
  snap->url = page_url;
  snap->fetched_at = now_timestamp();
  snap->sanitized_html = html::sanitize_html(body);
  snap->handle = html::make_handle(snap->sanitized_html, page_url);

  auto now = clock_();
  std::lock_guard lock(mutex_);
  purge_locked(now);
  entries_[snap->snapshot_id] = {snap, now + ttl_};
  return snap;
}

std::shared_ptr<const DocumentSnapshot> SnapshotCache::get(const std::string& id) {
  std::lock_guard lock(mutex_);
  purge_locked(clock_());
  auto it = entries_.find(id);
  if (it == entries_.end()) throw Error(Errc::not_found, "no snapshot '" + id + "' (unknown or expired)");
  return it->second.snapshot;
}

std::size_t SnapshotCache::size() {
  std::lock_guard lock(mutex_);
  purge_locked(clock_());
  return entries_.size();
}

void SnapshotCache::purge_locked(std::chrono::steady_clock::time_point now) {
  for (auto it = entries_.begin(); it != entries_.end();) {
    if (it->second.expires <= now) it = entries_.erase(it);
    else ++it;
  }
}

std::shared_ptr<const DocumentSnapshot> take_snapshot(Fetcher& fetcher, const std::string& page_url,
                                                      SnapshotCache& cache) {
  if (!url::is_absolute_http(page_url)) throw Error(Errc::validation, "url must be an absolute http(s) URL");
  FetchResponse res = fetcher.fetch(get_plan(page_url));
  if (!res.ok()) throw Error(Errc::fetch_failed, "HTTP " + std::to_string(res.status) + " from " + page_url);
  return cache.add(res.final_url, res.body);
}

}  // namespace svc
