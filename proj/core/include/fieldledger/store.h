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

#ifndef FIELDLEDGER_STORE_H_
#define FIELDLEDGER_STORE_H_

// Embedded append-only table store with optimistic commits and time-travel
// reads.
//
// On-disk layout for a table `t` under root `r`:
//   r/t/_log/00000001.json   one commit record per version
//   r/t/<sha256-hex>.ndjson  immutable data files, named by content digest
//
// Commit sequence (each step is a crash point):
//   1. write data bytes to r/t/.tmp-*            (kDataTempWritten)
//   2. rename into r/t/<digest>.ndjson           (kDataPublished)
//   3. write the log record to r/t/_log/.tmp-*   (kLogTempWritten)
//   4. hard-link it to _log/<version>.json       (kLogPublished)
//      The link fails if the version exists, which arbitrates racing writers.
//   5. unlink the temp log record                (kCleanedUp)
// A version is visible iff step 4 happened.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fieldledger/time.h"

namespace fieldledger {

using Version = std::int64_t;

struct DataFileRef {
  std::string name;
  std::uint64_t row_count = 0;
  std::string digest;
};

struct Commit {
  Version version = 0;
  Version parent = 0;
  std::vector<DataFileRef> files;
  Millis committed_at = 0;
  nlohmann::json op_meta = nlohmann::json::object();

  std::uint64_t row_count() const;
  nlohmann::json to_json() const;
  static Commit from_json(const nlohmann::json& doc);
};

// Rows in commit order, then in-file order.
struct RowSet {
  std::vector<nlohmann::json> rows;

  std::size_t size() const { return rows.size(); }
  bool empty() const { return rows.empty(); }
  // SHA-256 over the canonical serialization (one document per line).
  std::string digest() const;
};

enum class CommitStep {
  kDataTempWritten,
  kDataPublished,
  kLogTempWritten,
  kLogPublished,
  kCleanedUp,
};

inline constexpr CommitStep kAllCommitSteps[] = {
    CommitStep::kDataTempWritten, CommitStep::kDataPublished, CommitStep::kLogTempWritten,
    CommitStep::kLogPublished, CommitStep::kCleanedUp};

std::string_view commit_step_name(CommitStep step) noexcept;

// Test seam: called after each step of a commit. Throwing from the hook
// simulates a crash at that point.
using CommitHook = std::function<void(CommitStep)>;

struct CorruptFile {
  std::string name;
  std::vector<Version> affected_versions;
};

struct IntegrityReport {
  std::string table;
  Version latest = 0;
  std::vector<CorruptFile> corrupt_files;
  std::vector<CorruptFile> missing_files;
  std::vector<std::string> continuity_errors;
  std::vector<std::string> orphan_files;

  // Orphans are leftovers of interrupted commits and do not make a table
  // unclean.
  bool clean() const {
    return corrupt_files.empty() && missing_files.empty() && continuity_errors.empty();
  }
  nlohmann::json to_json() const;
};

struct StoreOptions {
  bool fsync = false;
};

bool is_valid_table_name(std::string_view name);

class Table {
 public:
  Table(std::filesystem::path dir, std::string name, Clock clock, StoreOptions options);
  Table(const Table&) = delete;
  Table& operator=(const Table&) = delete;

  const std::string& name() const { return name_; }
  const std::filesystem::path& dir() const { return dir_; }
  bool exists() const;
  // Creates the empty table (version 0). Idempotent.
  void create();

  // Highest published version; 0 for an empty or absent table.
  Version latest_version() const;

  // Throws Error(kVersionConflict) if `expected_version` is stale and
  // Error(kIntegrityError) if an identical data file exists but fails its
  // digest check.
  Version commit(std::span<const nlohmann::json> rows, Version expected_version,
                 nlohmann::json op_meta = nlohmann::json::object());

  // Throws Error(kUnknownVersion) when version is outside [0, latest].
  RowSet read_at(Version version) const;
  // Rows added by exactly this version.
  RowSet read_commit(Version version) const;

  Commit commit_record(Version version) const;
  // Throws Error(kUnknownTable) when the table was never created.
  std::vector<Commit> history() const;
  IntegrityReport verify() const;

  void set_commit_hook(CommitHook hook) { hook_ = std::move(hook); }

 private:
  std::filesystem::path log_path(Version version) const;
  std::shared_ptr<const std::vector<nlohmann::json>> load_file(const DataFileRef& ref) const;
  void step(CommitStep s) const;

  std::filesystem::path dir_;
  std::string name_;
  Clock clock_;
  StoreOptions options_;
  CommitHook hook_;

  mutable std::mutex mu_;
  mutable Version known_latest_ = 0;
  mutable std::map<Version, Commit> commit_cache_;
  mutable std::map<std::string, std::shared_ptr<const std::vector<nlohmann::json>>> file_cache_;
};

class VersionedStore {
 public:
  explicit VersionedStore(std::filesystem::path root, Clock clock = system_now_ms,
                          StoreOptions options = {});
  VersionedStore(const VersionedStore&) = delete;
  VersionedStore& operator=(const VersionedStore&) = delete;

  // Returns a handle whether or not the table exists yet; the first commit
  // creates it. Throws Error(kInvalidArgument) for names outside [a-z0-9_]{1,64}.
  Table& table(std::string_view name);
  std::vector<std::string> tables() const;

  const std::filesystem::path& root() const { return root_; }
  const Clock& clock() const { return clock_; }

 private:
  std::filesystem::path root_;
  Clock clock_;
  StoreOptions options_;
  mutable std::mutex mu_;
  std::map<std::string, std::unique_ptr<Table>, std::less<>> tables_;
};

}  // namespace fieldledger

#endif  // FIELDLEDGER_STORE_H_
