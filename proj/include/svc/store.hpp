#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "svc/model.hpp"

namespace svc {

/// Directory of `<id>.svcspec.json` files. Writes go to a temp file that is
/// renamed into place, so a reader never sees a half-written spec.
class SpecStore {
 public:
  static constexpr const char* kExtension = ".svcspec.json";

  /// Creates the directory if needed, removes stale temp files and loads
  /// every spec. Unreadable files are skipped and listed in load_errors().
  explicit SpecStore(std::filesystem::path root);

  /// Throws Error(Errc::validation) for an invalid spec or unsafe id,
  /// Error(Errc::io_error) when the write fails.
  void save(const ServiceSpec& spec);
  ServiceSpec load(const std::string& id) const;  // not-found
  void remove(const std::string& id);             // not-found
  bool contains(const std::string& id) const;
  std::vector<ServiceSpec> list() const;  // sorted by id
  std::vector<std::string> ids() const;

  /// Re-reads the directory, e.g. after another process wrote to it.
  void reload();

  const std::filesystem::path& root() const { return root_; }
  std::vector<std::string> load_errors() const;

  /// Called with the temp path after it is written and before the rename.
  /// Throwing from the hook simulates a crash at that point.
  using FaultHook = std::function<void(const std::filesystem::path& temp)>;
  void set_fault_hook(FaultHook hook);

  static bool is_safe_id(const std::string& id);
  std::filesystem::path path_for(const std::string& id) const;

 private:
  void scan();

  std::filesystem::path root_;
  mutable std::mutex mutex_;
  std::map<std::string, ServiceSpec> index_;
  std::vector<std::string> load_errors_;
  FaultHook fault_hook_;
};

}  // namespace svc
