#include "svc/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cctype>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "svc/error.hpp"
#include "svc/serialize.hpp"
#include "svc/validate.hpp"

namespace fs = std::filesystem;

namespace svc {

namespace {

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void write_file_synced(const fs::path& path, const std::string& data) {
  int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) throw Error(Errc::io_error, "cannot create " + path.string() + ": " + std::strerror(errno));
  std::size_t written = 0;
  while (written < data.size()) {
    ssize_t n = ::write(fd, data.data() + written, data.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      int err = errno;
      ::close(fd);
      throw Error(Errc::io_error, "cannot write " + path.string() + ": " + std::strerror(err));
    }
    written += static_cast<std::size_t>(n);
  }
  ::fsync(fd);
  ::close(fd);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

SpecStore::SpecStore(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_, ec);
  if (ec) throw Error(Errc::io_error, "cannot create store directory " + root_.string() + ": " + ec.message());
  std::lock_guard lock(mutex_);
  scan();
}

bool SpecStore::is_safe_id(const std::string& id) {
  if (id.empty() || id.size() > 200 || id[0] == '.') return false;
  for (char c : id) {
    bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    if (!ok) return false;
  }
  return true;
}

fs::path SpecStore::path_for(const std::string& id) const { return root_ / (id + kExtension); }

void SpecStore::scan() {
  index_.clear();
  load_errors_.clear();
  for (const auto& entry : fs::directory_iterator(root_)) {
    if (!entry.is_regular_file()) continue;
    std::string name = entry.path().filename().string();
    if (name[0] == '.' && ends_with(name, ".tmp")) {
      std::error_code ec;
      fs::remove(entry.path(), ec);  // left behind by an interrupted save
      continue;
    }
    if (!ends_with(name, kExtension)) continue;
    try {
      ServiceSpec spec = deserialize(read_file(entry.path()));
      std::string expected = name.substr(0, name.size() - std::strlen(kExtension));
      if (spec.id != expected) {
        load_errors_.push_back(name + ": id '" + spec.id + "' does not match the file name");
        continue;
      }
      index_[spec.id] = std::move(spec);
    } catch (const std::exception& e) {
      load_errors_.push_back(name + ": " + e.what());
    }
  }
}

void SpecStore::reload() {
  std::lock_guard lock(mutex_);
  scan();
}

void SpecStore::save(const ServiceSpec& spec) {
  if (!is_safe_id(spec.id))
    throw Error(Errc::validation, "id '" + spec.id + "' must use letters, digits, '-', '_' or '.'");
  auto report = validate_spec(spec);
  if (!report.ok()) throw Error(Errc::validation, report.summary());

  std::string text = serialize(spec);
  std::lock_guard lock(mutex_);
  fs::path target = path_for(spec.id);
  fs::path temp = root_ / ("." + spec.id + kExtension + ".tmp");
  write_file_synced(temp, text);
  if (fault_hook_) fault_hook_(temp);
  std::error_code ec;
  fs::rename(temp, target, ec);
  if (ec) {
    fs::remove(temp, ec);
    throw Error(Errc::io_error, "cannot move " + temp.string() + " into place");
  }
  index_[spec.id] = spec;
}

ServiceSpec SpecStore::load(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = index_.find(id);
  if (it == index_.end()) throw Error(Errc::not_found, "no service with id '" + id + "'");
  return it->second;
}

void SpecStore::remove(const std::string& id) {
  std::lock_guard lock(mutex_);
  auto it = index_.find(id);
  if (it == index_.end()) throw Error(Errc::not_found, "no service with id '" + id + "'");
  std::error_code ec;
  fs::remove(path_for(id), ec);
  if (ec) throw Error(Errc::io_error, "cannot delete " + path_for(id).string() + ": " + ec.message());
  index_.erase(it);
}

bool SpecStore::contains(const std::string& id) const {
  std::lock_guard lock(mutex_);
  return index_.count(id) > 0;
}

std::vector<ServiceSpec> SpecStore::list() const {
  std::lock_guard lock(mutex_);
  std::vector<ServiceSpec> out;
  for (const auto& [id, spec] : index_) out.push_back(spec);
  return out;
}

std::vector<std::string> SpecStore::ids() const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, spec] : index_) out.push_back(id);
  return out;
}

std::vector<std::string> SpecStore::load_errors() const {
  std::lock_guard lock(mutex_);
  return load_errors_;
}

void SpecStore::set_fault_hook(FaultHook hook) {
  std::lock_guard lock(mutex_);
  fault_hook_ = std::move(hook);
}

}  // namespace svc
