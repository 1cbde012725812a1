#include "svc/url.hpp"

#include <cctype>

namespace svc::url {

namespace {

bool is_scheme_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.';
}

std::string remove_dot_segments(std::string_view input) {
  std::string in(input);
  std::string out;
  while (!in.empty()) {
    if (in.starts_with("../")) {
      in.erase(0, 3);
    } else if (in.starts_with("./")) {
      in.erase(0, 2);
    } else if (in.starts_with("/./")) {
      in.replace(0, 3, "/");
    } else if (in == "/.") {
      in = "/";
    } else if (in.starts_with("/../") || in == "/..") {
      if (in == "/..") {
        in = "/";
      } else {
        in.replace(0, 4, "/");
      }
      auto pos = out.rfind('/');
      out.erase(pos == std::string::npos ? 0 : pos);
    } else if (in == "." || in == "..") {
      in.clear();
    } else {
      std::size_t start = in[0] == '/' ? 1 : 0;
      auto next = in.find('/', start);
      if (next == std::string::npos) next = in.size();
      out += in.substr(0, next);
      in.erase(0, next);
    }
  }
  return out;
}

std::string merge_paths(const Url& base, std::string_view ref_path) {
  if (base.has_authority && base.path.empty()) return "/" + std::string(ref_path);
  auto pos = base.path.rfind('/');
  if (pos == std::string::npos) return std::string(ref_path);
  return base.path.substr(0, pos + 1) + std::string(ref_path);
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string Url::str() const {
  std::string out;
  if (!scheme.empty()) out += scheme + ":";
  if (has_authority) out += "//" + authority;
  out += path;
  if (has_query) out += "?" + query;
  if (has_fragment) out += "#" + fragment;
  return out;
}

std::string Url::host() const {
  std::string_view a = authority;
  if (auto at = a.rfind('@'); at != std::string_view::npos) a.remove_prefix(at + 1);
  if (!a.empty() && a.front() == '[') {
    auto close = a.find(']');
    return std::string(a.substr(0, close == std::string_view::npos ? a.size() : close + 1));
  }
  if (auto colon = a.find(':'); colon != std::string_view::npos) a = a.substr(0, colon);
  std::string host(a);
  for (auto& c : host) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return host;
}

std::string Url::origin() const {
  std::string_view a = authority;
  if (auto at = a.rfind('@'); at != std::string_view::npos) a.remove_prefix(at + 1);
  return scheme + "://" + std::string(a);
}

std::string Url::path_and_query() const {
  std::string out = path.empty() ? "/" : path;
  if (has_query) out += "?" + query;
  return out;
}

Url parse(std::string_view text) {
  Url u;
  std::string_view rest = text;
  std::size_t i = 0;
  while (i < rest.size() && is_scheme_char(rest[i])) ++i;
  if (i > 0 && i < rest.size() && rest[i] == ':' &&
      std::isalpha(static_cast<unsigned char>(rest[0]))) {
    u.scheme = std::string(rest.substr(0, i));
    for (auto& c : u.scheme) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    rest.remove_prefix(i + 1);
  }
  if (auto hash = rest.find('#'); hash != std::string_view::npos) {
    u.has_fragment = true;
    u.fragment = std::string(rest.substr(hash + 1));
    rest = rest.substr(0, hash);
  }
  if (auto q = rest.find('?'); q != std::string_view::npos) {
    u.has_query = true;
    u.query = std::string(rest.substr(q + 1));
    rest = rest.substr(0, q);
  }
  if (rest.starts_with("//")) {
    rest.remove_prefix(2);
    auto slash = rest.find('/');
    u.has_authority = true;
    u.authority = std::string(rest.substr(0, slash));
    rest = slash == std::string_view::npos ? std::string_view{} : rest.substr(slash);
  }
  u.path = std::string(rest);
  return u;
}

std::string resolve(std::string_view base_text, std::string_view reference) {
  // Trim surrounding whitespace the way browsers do for href values.
  while (!reference.empty() && std::isspace(static_cast<unsigned char>(reference.front())))
    reference.remove_prefix(1);
  while (!reference.empty() && std::isspace(static_cast<unsigned char>(reference.back())))
    reference.remove_suffix(1);

  Url base = parse(base_text);
  Url ref = parse(reference);
  Url target;
  if (!ref.scheme.empty()) {
    target = ref;
    target.path = remove_dot_segments(ref.path);
  } else {
    if (ref.has_authority) {
      target = ref;
      target.path = remove_dot_segments(ref.path);
    } else {
      target.has_authority = base.has_authority;
      target.authority = base.authority;
      if (ref.path.empty()) {
        target.path = base.path;
        if (ref.has_query) {
          target.has_query = true;
          target.query = ref.query;
        } else {
          target.has_query = base.has_query;
          target.query = base.query;
        }
      } else {
        if (ref.path.front() == '/') {
          target.path = remove_dot_segments(ref.path);
        } else {
          target.path = remove_dot_segments(merge_paths(base, ref.path));
        }
        target.has_query = ref.has_query;
        target.query = ref.query;
      }
    }
    target.scheme = base.scheme;
  }
  target.has_fragment = ref.has_fragment;
  target.fragment = ref.fragment;
  return target.str();
}

bool is_absolute_http(std::string_view text) {
  Url u = parse(text);
  return (u.scheme == "http" || u.scheme == "https") && u.has_authority && !u.host().empty();
}

std::string form_encode(std::string_view raw) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(raw.size());
  for (unsigned char c : raw) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '*') {
      out += static_cast<char>(c);
    } else if (c == ' ') {
      out += '+';
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    }
  }
  return out;
}

std::string form_decode(std::string_view encoded) {
  std::string out;
  out.reserve(encoded.size());
  for (std::size_t i = 0; i < encoded.size(); ++i) {
    char c = encoded[i];
    if (c == '+') {
      out += ' ';
    } else if (c == '%' && i + 2 < encoded.size() && hex_value(encoded[i + 1]) >= 0 &&
               hex_value(encoded[i + 2]) >= 0) {
      out += static_cast<char>(hex_value(encoded[i + 1]) * 16 + hex_value(encoded[i + 2]));
      i += 2;
    } else {
      out += c;
    }
  }
  return out;
}

std::string encode_params(const std::vector<Param>& params) {
  std::string out;
  for (const auto& [name, value] : params) {
    if (!out.empty()) out += '&';
    out += form_encode(name);
    out += '=';
    out += form_encode(value);
  }
  return out;
}

std::vector<Param> decode_query(std::string_view query) {
  std::vector<Param> out;
  while (!query.empty()) {
    auto amp = query.find('&');
    std::string_view pair = query.substr(0, amp);
    query = amp == std::string_view::npos ? std::string_view{} : query.substr(amp + 1);
    if (pair.empty()) continue;
    auto eq = pair.find('=');
    if (eq == std::string_view::npos) {
      out.emplace_back(form_decode(pair), "");
    } else {
      out.emplace_back(form_decode(pair.substr(0, eq)), form_decode(pair.substr(eq + 1)));
    }
  }
  return out;
}

std::pair<std::string, std::vector<Param>> split_query(std::string_view full) {
  Url u = parse(full);
  std::vector<Param> params;
  if (u.has_query) params = decode_query(u.query);
  u.has_query = false;
  u.query.clear();
  u.has_fragment = false;
  u.fragment.clear();
  return {u.str(), std::move(params)};
}

std::string with_params(std::string_view base, const std::vector<Param>& params) {
  std::string out(base);
  if (params.empty()) return out;
  auto hash = out.find('#');
  std::string fragment;
  if (hash != std::string::npos) {
    fragment = out.substr(hash);
    out.erase(hash);
  }
  if (out.find('?') == std::string::npos) {
    out += '?';
  } else if (out.back() != '?' && out.back() != '&') {
    out += '&';
  }
  out += encode_params(params);
  return out + fragment;
}

}  // namespace svc::url
