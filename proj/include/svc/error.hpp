#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace svc {

enum class Errc {
  parse_error,
  version_mismatch,
  validation,
  not_found,
  io_error,
  selector_parse,
  unresolvable_path,
  input_not_found,
  input_has_no_name,
  ambiguous_input,
  fetch_failed,
  strategy_unconfigured,
  no_applicable_strategy,
  no_such_page,
  duplicate_provider,
  unknown_visualizer,
  invalid_option,
  duplicate_id,
  unknown_operator,
  port_in_use,
  invalid_argument,
};

/// Kebab-case name of an error code, e.g. "no-applicable-strategy". These
/// names travel over the HTTP API and CLI unchanged.
std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }
  std::string_view name() const noexcept { return errc_name(code_); }

 private:
  Errc code_;
};

}  // namespace svc
