#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "svc/fetcher.hpp"

namespace svc {

struct CliContext {
  Fetcher* fetcher = nullptr;                                         // default: an HttpFetcher
  std::function<std::string()> clock;                                 // fetched_at source
  std::function<std::optional<std::string>(const std::string&)> env;  // default: the process environment
};

/// Runs the `svc` command line. `args` excludes the program name.
/// Returns 0 on success, 1 on domain errors, 2 on usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const CliContext& context = {});

}  // namespace svc
