#include "svc/error.hpp"

namespace svc {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::parse_error: return "parse-error";
    case Errc::version_mismatch: return "version-mismatch";
    case Errc::validation: return "validation-error";
    case Errc::not_found: return "not-found";
    case Errc::io_error: return "io-error";
    case Errc::selector_parse: return "selector-parse-error";
    case Errc::unresolvable_path: return "unresolvable-path";
    case Errc::input_not_found: return "input-not-found";
    case Errc::input_has_no_name: return "input-has-no-name";
    case Errc::ambiguous_input: return "ambiguous-input";
    case Errc::fetch_failed: return "fetch-failed";
    case Errc::strategy_unconfigured: return "strategy-unconfigured";
    case Errc::no_applicable_strategy: return "no-applicable-strategy";
    case Errc::no_such_page: return "no-such-page";
    case Errc::duplicate_provider: return "duplicate-provider";
    case Errc::unknown_visualizer: return "unknown-visualizer";
    case Errc::invalid_option: return "invalid-option";
    case Errc::duplicate_id: return "duplicate-id";
    case Errc::unknown_operator: return "unknown-operator";
    case Errc::port_in_use: return "port-in-use";
    case Errc::invalid_argument: return "invalid-argument";
  }
  return "unknown";
}

}  // namespace svc
