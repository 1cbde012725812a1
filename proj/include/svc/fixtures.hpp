#pragma once

// Local search engines over a fixed book dataset. Every engine answers as a
// pure function of its query parameters, which makes ground_truth() an
// independent oracle for engine output.

#include <atomic>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "svc/model.hpp"

namespace svc::fixtures {

enum class Mode {
  form_reload,      // /form/   classic GET form, full-page results
  ajax_fragment,    // /ajax/   button fetches an HTML fragment from /api/search
  keystroke_ajax,   // /keys/   no trigger; the input itself names its endpoint
  infinite_scroll,  // /scroll/ results arrive only through script on scroll
  formless,         // /plain/  input and button outside any form
};

std::string_view to_string(Mode mode);
std::string_view path_of(Mode mode);
std::optional<Mode> mode_from(std::string_view name);
/// The strategy each mode is built to exhibit; empty for infinite_scroll.
std::optional<StrategyVariant> expected_variant(Mode mode);

struct Book {
  int id = 0;
  std::string title;
  std::string author;
  std::string rating;  // one decimal, as displayed: "4.5"
  std::string venue;   // "journal" | "conference"
  int year = 0;
  std::string description;
  std::string bibtex;
};

inline constexpr int kPageSize = 10;

const std::vector<Book>& dataset();

/// Brute-force scan: case-insensitive substring on title or author, optional
/// venue filter, optional sort ("rating": rating desc then id; "year": year
/// asc then id). Unsorted results follow id order.
std::vector<Book> ground_truth(std::string_view keywords, const std::optional<std::string>& venue = std::nullopt,
                               const std::optional<std::string>& sort = std::nullopt);

class FixtureServer {
 public:
  FixtureServer();
  ~FixtureServer();
  FixtureServer(const FixtureServer&) = delete;
  FixtureServer& operator=(const FixtureServer&) = delete;

  /// Binds 127.0.0.1:`port` (0 picks a free port) and serves on a background
  /// thread. Throws Error(Errc::port_in_use).
  void start(int port = 0);
  void stop();
  /// Blocks until stop() is called from another thread.
  void wait();

  int port() const;
  std::string base_url() const;  // "http://127.0.0.1:<port>"

  /// Detail pages of these book ids answer 404.
  void set_missing_details(std::set<int> ids);
  std::size_t request_count() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Service definition for one fixture engine. The strategy is left empty so
/// callers exercise detection; pass `with_strategy` to get the expected one.
ServiceSpec fixture_spec(Mode mode, const std::string& base_url, bool with_strategy = false);
/// api_based definition for /jsonapi through the fixture-json provider.
ServiceSpec fixture_json_spec(const std::string& base_url);

std::string book_url(const std::string& base_url, int id);

}  // namespace svc::fixtures
