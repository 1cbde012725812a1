#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace svc::url {

using Param = std::pair<std::string, std::string>;

/// RFC 3986 components. `has_*` flags distinguish an empty component from an
/// absent one ("http://h/?" keeps an empty query).
struct Url {
  std::string scheme;
  bool has_authority = false;
  std::string authority;
  std::string path;
  bool has_query = false;
  std::string query;
  bool has_fragment = false;
  std::string fragment;

  std::string str() const;
  std::string host() const;          // authority without userinfo/port
  std::string origin() const;        // scheme://host[:port], userinfo dropped
  std::string path_and_query() const;
};

Url parse(std::string_view text);

/// Resolves `reference` against `base` per RFC 3986 section 5.2.
std::string resolve(std::string_view base, std::string_view reference);

/// True for absolute http(s) URLs with a non-empty host.
bool is_absolute_http(std::string_view text);

/// application/x-www-form-urlencoded component encoding (space -> '+').
std::string form_encode(std::string_view raw);
std::string form_decode(std::string_view encoded);

std::string encode_params(const std::vector<Param>& params);
std::vector<Param> decode_query(std::string_view query);

/// Splits "scheme://host/p?a=1&b=2" into ("scheme://host/p", [(a,1),(b,2)]).
std::pair<std::string, std::vector<Param>> split_query(std::string_view full);

/// Appends encoded params to `base`, respecting an existing query string.
std::string with_params(std::string_view base, const std::vector<Param>& params);

}  // namespace svc::url
