// Copyright 2026 The FieldLedger Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fieldledger/store.h"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <random>
#include <regex>
#include <sstream>
#include <system_error>

#include "fieldledger/digest.h"
#include "fieldledger/error.h"
#include "fieldledger/event.h"

namespace fieldledger {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr std::string_view kTempPrefix = ".tmp-";

std::string temp_suffix() {
  thread_local std::mt19937_64 rng(std::random_device{}() ^
                                   (static_cast<std::uint64_t>(::getpid()) << 32));
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(rng()));
  return buf;
}

void write_new_file(const fs::path& path, std::string_view bytes, bool sync) {
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_EXCL | O_CLOEXEC, 0644);
  if (fd < 0) {
    throw fs::filesystem_error("create", path, std::error_code(errno, std::generic_category()));
  }
  std::size_t off = 0;
  while (off < bytes.size()) {
    const ssize_t n = ::write(fd, bytes.data() + off, bytes.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      const int err = errno;
      ::close(fd);
      throw fs::filesystem_error("write", path, std::error_code(err, std::generic_category()));
    }
    off += static_cast<std::size_t>(n);
  }
  if (sync) ::fsync(fd);
  ::close(fd);
}

std::optional<std::string> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

std::string version_file_name(Version v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%08lld.json", static_cast<long long>(v));
  return buf;
}

std::optional<Version> parse_version_file_name(const std::string& name) {
  static const std::regex kPattern(R"(^(\d{8,})\.json$)");
  std::smatch m;
  if (!std::regex_match(name, m, kPattern)) return std::nullopt;
  return std::stoll(m[1].str());
}

std::vector<json> parse_lines(std::string_view bytes) {
  std::vector<json> rows;
  std::size_t start = 0;
  while (start < bytes.size()) {
    std::size_t end = bytes.find('\n', start);
    if (end == std::string_view::npos) end = bytes.size();
    if (end > start) rows.push_back(json::parse(bytes.substr(start, end - start)));
    start = end + 1;
  }
  return rows;
}

}  // namespace

std::string_view commit_step_name(CommitStep step) noexcept {
  switch (step) {
    case CommitStep::kDataTempWritten: return "data_temp_written";
    case CommitStep::kDataPublished: return "data_published";
    case CommitStep::kLogTempWritten: return "log_temp_written";
    case CommitStep::kLogPublished: return "log_published";
    case CommitStep::kCleanedUp: return "cleaned_up";
  }
  return "unknown";
}

std::uint64_t Commit::row_count() const {
  std::uint64_t n = 0;
  for (const auto& f : files) n += f.row_count;
  return n;
}

json Commit::to_json() const {
  json files_json = json::array();
  for (const auto& f : files) {
    files_json.push_back({{"name", f.name}, {"row_count", f.row_count}, {"digest", f.digest}});
  }
  return {{"version", version},   {"parent", parent},   {"files", files_json},
          {"committed_at", committed_at}, {"op_meta", op_meta}};
}

Commit Commit::from_json(const json& doc) {
  Commit c;
  c.version = doc.at("version").get<Version>();
  c.parent = doc.at("parent").get<Version>();
  c.committed_at = doc.at("committed_at").get<Millis>();
  c.op_meta = doc.value("op_meta", json::object());
  for (const json& f : doc.at("files")) {
    c.files.push_back({f.at("name").get<std::string>(), f.at("row_count").get<std::uint64_t>(),
                       f.at("digest").get<std::string>()});
  }
  return c;
}

std::string RowSet::digest() const {
  Sha256 h;
  for (const auto& row : rows) {
    h.update(canonical_dump(row));
    h.update("\n");
  }
  return h.hex_digest();
}

json IntegrityReport::to_json() const {
  auto files_json = [](const std::vector<CorruptFile>& files) {
    json list = json::array();
    for (const auto& f : files) list.push_back({{"name", f.name}, {"affected_versions", f.affected_versions}});
    return list;
  };
  return {{"table", table},
          {"latest", latest},
          {"clean", clean()},
          {"corrupt_files", files_json(corrupt_files)},
          {"missing_files", files_json(missing_files)},
          {"continuity_errors", continuity_errors},
          {"orphan_files", orphan_files}};
}

bool is_valid_table_name(std::string_view name) {
  if (name.empty() || name.size() > 64) return false;
  for (char c : name) {
    if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')) return false;
  }
  return true;
}

Table::Table(fs::path dir, std::string name, Clock clock, StoreOptions options)
    : dir_(std::move(dir)), name_(std::move(name)), clock_(std::move(clock)), options_(options) {}

bool Table::exists() const { return fs::is_directory(dir_ / "_log"); }

fs::path Table::log_path(Version version) const { return dir_ / "_log" / version_file_name(version); }

void Table::step(CommitStep s) const {
  if (hook_) hook_(s);
}

Version Table::latest_version() const {
  std::lock_guard lock(mu_);
  Version v = known_latest_;
  while (fs::exists(log_path(v + 1))) ++v;
  known_latest_ = v;
  return v;
}

Version Table::commit(std::span<const json> rows, Version expected_version, json op_meta) {
  if (rows.empty()) throw Error(Errc::kInvalidArgument, "commit requires at least one row");

  std::string bytes;
  for (const auto& row : rows) {
    bytes += canonical_dump(row);
    bytes += '\n';
  }
  const std::string digest = sha256_hex(bytes);
  const std::string file_name = digest + ".ndjson";

  fs::create_directories(dir_ / "_log");
  const Version latest = latest_version();
  if (expected_version != latest) {
    throw Error(Errc::kVersionConflict, name_ + ": expected version " +
                                            std::to_string(expected_version) + ", latest is " +
                                            std::to_string(latest));
  }

  const fs::path data_path = dir_ / file_name;
  if (fs::exists(data_path)) {
    const auto existing = read_file(data_path);
    if (!existing || sha256_hex(*existing) != digest) {
      throw Error(Errc::kIntegrityError, name_ + ": existing data file " + file_name +
                                             " does not match its digest");
    }
  } else {
    const fs::path tmp = dir_ / (std::string(kTempPrefix) + temp_suffix());
    write_new_file(tmp, bytes, options_.fsync);
    step(CommitStep::kDataTempWritten);
    fs::rename(tmp, data_path);
    step(CommitStep::kDataPublished);
  }

  Commit c;
  c.version = expected_version + 1;
  c.parent = expected_version;
  c.files.push_back({file_name, rows.size(), digest});
  c.committed_at = clock_();
  c.op_meta = op_meta.is_null() ? json::object() : std::move(op_meta);

  const fs::path log_tmp = dir_ / "_log" / (std::string(kTempPrefix) + temp_suffix());
  write_new_file(log_tmp, canonical_dump(c.to_json()), options_.fsync);
  step(CommitStep::kLogTempWritten);
  std::error_code ec;
  fs::create_hard_link(log_tmp, log_path(c.version), ec);
  if (ec) {
    fs::remove(log_tmp);
    if (ec == std::errc::file_exists) {
      throw Error(Errc::kVersionConflict,
                  name_ + ": version " + std::to_string(c.version) + " was committed concurrently");
    }
    throw fs::filesystem_error("link", log_tmp, log_path(c.version), ec);
  }
  if (options_.fsync) {
    const int dfd = ::open((dir_ / "_log").c_str(), O_RDONLY | O_DIRECTORY | O_CLOEXEC);
    if (dfd >= 0) {
      ::fsync(dfd);
      ::close(dfd);
    }
  }
  step(CommitStep::kLogPublished);
  fs::remove(log_tmp);
  step(CommitStep::kCleanedUp);

  {
    std::lock_guard lock(mu_);
    if (known_latest_ < c.version) known_latest_ = c.version;
    commit_cache_[c.version] = c;
  }
  return c.version;
}

Commit Table::commit_record(Version version) const {
  {
    std::lock_guard lock(mu_);
    if (auto it = commit_cache_.find(version); it != commit_cache_.end()) return it->second;
  }
  const auto text = read_file(log_path(version));
  if (!text) {
    throw Error(Errc::kUnknownVersion, name_ + ": no commit record for version " + std::to_string(version));
  }
  Commit c = Commit::from_json(json::parse(*text));
  std::lock_guard lock(mu_);
  commit_cache_[version] = c;
  return c;
}

std::shared_ptr<const std::vector<json>> Table::load_file(const DataFileRef& ref) const {
  {
    std::lock_guard lock(mu_);
    if (auto it = file_cache_.find(ref.digest); it != file_cache_.end()) return it->second;
  }
  const auto bytes = read_file(dir_ / ref.name);
  if (!bytes) throw Error(Errc::kIntegrityError, name_ + ": missing data file " + ref.name);
  if (sha256_hex(*bytes) != ref.digest) {
    throw Error(Errc::kIntegrityError, name_ + ": data file " + ref.name + " fails digest check");
  }
  auto rows = std::make_shared<const std::vector<json>>(parse_lines(*bytes));
  std::lock_guard lock(mu_);
  file_cache_.emplace(ref.digest, rows);
  return rows;
}

RowSet Table::read_at(Version version) const {
  const Version latest = latest_version();
  if (version < 0 || version > latest) {
    throw Error(Errc::kUnknownVersion, name_ + ": version " + std::to_string(version) +
                                           " not in [0, " + std::to_string(latest) + "]");
  }
  RowSet out;
  for (Version v = 1; v <= version; ++v) {
    for (const auto& ref : commit_record(v).files) {
      const auto rows = load_file(ref);
      out.rows.insert(out.rows.end(), rows->begin(), rows->end());
    }
  }
  return out;
}

RowSet Table::read_commit(Version version) const {
  const Version latest = latest_version();
  if (version < 1 || version > latest) {
    throw Error(Errc::kUnknownVersion, name_ + ": version " + std::to_string(version) +
                                           " not in [1, " + std::to_string(latest) + "]");
  }
  RowSet out;
  for (const auto& ref : commit_record(version).files) {
    const auto rows = load_file(ref);
    out.rows.insert(out.rows.end(), rows->begin(), rows->end());
  }
  return out;
}

void Table::create() { fs::create_directories(dir_ / "_log"); }

std::vector<Commit> Table::history() const {
  if (!exists()) throw Error(Errc::kUnknownTable, name_);
  std::vector<Commit> out;
  const Version latest = latest_version();
  for (Version v = 1; v <= latest; ++v) out.push_back(commit_record(v));
  return out;
}

IntegrityReport Table::verify() const {
  IntegrityReport report;
  report.table = name_;
  if (!exists()) return report;

  std::vector<Version> listed;
  for (const auto& entry : fs::directory_iterator(dir_ / "_log")) {
    const std::string fname = entry.path().filename().string();
    if (fname.rfind(kTempPrefix, 0) == 0) {
      report.orphan_files.push_back("_log/" + fname);
    } else if (auto v = parse_version_file_name(fname)) {
      listed.push_back(*v);
    } else {
      report.orphan_files.push_back("_log/" + fname);
    }
  }
  std::sort(listed.begin(), listed.end());
  Version contiguous = 0;
  for (Version v : listed) {
    if (v == contiguous + 1) {
      contiguous = v;
    } else {
      report.continuity_errors.push_back("version " + std::to_string(v) + " follows gap after " +
                                         std::to_string(contiguous));
    }
  }
  report.latest = contiguous;

  std::map<std::string, CorruptFile> referenced;
  std::map<std::string, std::string> expected_digest;
  for (Version v = 1; v <= contiguous; ++v) {
    const auto text = read_file(log_path(v));
    json doc = text ? json::parse(*text, nullptr, false) : json(nullptr);
    if (doc.is_discarded() || !doc.is_object()) {
      report.continuity_errors.push_back("version " + std::to_string(v) + ": unreadable log record");
      continue;
    }
    Commit c;
    try {
      c = Commit::from_json(doc);
    } catch (const std::exception& e) {
      report.continuity_errors.push_back("version " + std::to_string(v) + ": " + e.what());
      continue;
    }
    if (c.version != v || c.parent != v - 1) {
      report.continuity_errors.push_back("version " + std::to_string(v) + ": bad version/parent link");
    }
    for (const auto& f : c.files) {
      auto& entry = referenced[f.name];
      entry.name = f.name;
      entry.affected_versions.push_back(v);
      expected_digest[f.name] = f.digest;
    }
  }

  for (const auto& [fname, entry] : referenced) {
    const auto bytes = read_file(dir_ / fname);
    if (!bytes) {
      report.missing_files.push_back(entry);
      continue;
    }
    const std::string actual = sha256_hex(*bytes);
    if (actual != expected_digest[fname] || fname != actual + ".ndjson") {
      report.corrupt_files.push_back(entry);
    }
  }

  for (const auto& entry : fs::directory_iterator(dir_)) {
    if (!entry.is_regular_file()) continue;
    const std::string fname = entry.path().filename().string();
    if (fname.rfind(kTempPrefix, 0) == 0 ||
        (entry.path().extension() == ".ndjson" && !referenced.count(fname))) {
      report.orphan_files.push_back(fname);
    }
  }
  std::sort(report.orphan_files.begin(), report.orphan_files.end());
  return report;
}

VersionedStore::VersionedStore(fs::path root, Clock clock, StoreOptions options)
    : root_(std::move(root)), clock_(std::move(clock)), options_(options) {
  fs::create_directories(root_);
}

Table& VersionedStore::table(std::string_view name) {
  if (!is_valid_table_name(name)) {
    throw Error(Errc::kInvalidArgument, "table name must match [a-z0-9_]{1,64}: '" + std::string(name) + "'");
  }
  std::lock_guard lock(mu_);
  auto it = tables_.find(name);
  if (it == tables_.end()) {
    it = tables_.emplace(std::string(name), std::make_unique<Table>(root_ / std::string(name),
                                                                    std::string(name), clock_, options_))
             .first;
  }
  return *it->second;
}

std::vector<std::string> VersionedStore::tables() const {
  std::vector<std::string> out;
  if (!fs::exists(root_)) return out;
  for (const auto& entry : fs::directory_iterator(root_)) {
    const std::string fname = entry.path().filename().string();
    if (entry.is_directory() && is_valid_table_name(fname) && fs::is_directory(entry.path() / "_log")) {
      out.push_back(fname);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace fieldledger
