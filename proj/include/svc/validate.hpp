#pragma once

#include <string>
#include <vector>

#include "svc/model.hpp"

namespace svc {

enum class Severity { error, warning };

struct Problem {
  Severity severity = Severity::error;
  std::string path;  // dotted field path, e.g. "result_spec.target_url"
  std::string message;
};

struct ValidationReport {
  std::vector<Problem> problems;

  bool ok() const;  // no errors (warnings allowed)
  std::vector<Problem> errors() const;
  std::vector<Problem> warnings() const;
  std::string summary() const;
};

/// Checks every ServiceSpec invariant. Never throws.
ValidationReport validate_spec(const ServiceSpec& spec) noexcept;

/// Checks a query against the spec it targets: filter/ordering names exist,
/// exclusive groups have at most one active condition, page >= 1.
ValidationReport validate_query(const ServiceSpec& spec, const SearchQuery& query) noexcept;

/// Distinct placeholder names in a URL template, in order of first use.
std::vector<std::string> template_placeholders(std::string_view text);

/// Loose RFC 3339 check: YYYY-MM-DDTHH:MM:SS with optional fraction and Z/offset.
bool is_timestamp(std::string_view text);

}  // namespace svc
