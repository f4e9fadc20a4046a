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

#ifndef FIELDLEDGER_TRACKER_H_
#define FIELDLEDGER_TRACKER_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fieldledger/store.h"
#include "fieldledger/time.h"
#include "fieldledger/ulid.h"

namespace fieldledger {

enum class RunStatus { kRunning, kFinished, kFailed };

std::string_view run_status_label(RunStatus status) noexcept;

struct SnapshotRef {
  std::string table;
  Version version = 0;
  std::string digest;  // RowSet digest at creation

  bool operator==(const SnapshotRef&) const = default;
};

struct MetricPoint {
  std::string key;
  double value = 0;
  std::int64_t step = 0;
  Millis logged_at = 0;
};

struct ExperimentRun {
  std::string run_id;
  std::string name;
  RunStatus status = RunStatus::kRunning;
  std::map<std::string, std::string> params;
  std::vector<MetricPoint> metrics;
  std::vector<SnapshotRef> snapshot_refs;
  Millis started_at = 0;
  std::optional<Millis> ended_at;
  nlohmann::json artifacts = nlohmann::json::object();

  // Points for `key`, ordered by step (stable for equal steps).
  std::vector<MetricPoint> metric_history(std::string_view key) const;

  nlohmann::json to_json() const;
  static ExperimentRun from_json(const nlohmann::json& doc);
};

// Run registry kept as one JSON document per run under `runs_dir`. Mutations
// hold an advisory file lock so several processes can share the directory.
class ExperimentTracker {
 public:
  ExperimentTracker(std::filesystem::path runs_dir, VersionedStore& store, Clock clock = system_now_ms,
                    std::uint64_t seed = 0);

  // Throws Error(kUnknownVersion) if a referenced version does not exist.
  ExperimentRun create_run(const std::string& name,
                           const std::vector<std::pair<std::string, Version>>& snapshot_refs,
                           std::map<std::string, std::string> params = {});

  // The following throw Error(kUnknownRun) or Error(kRunClosed).
  void log_metric(const std::string& run_id, const std::string& key, double value, std::int64_t step);
  void set_param(const std::string& run_id, const std::string& key, const std::string& value);
  void attach(const std::string& run_id, const std::string& key, nlohmann::json value);
  ExperimentRun finalize_run(const std::string& run_id, RunStatus status);

  ExperimentRun get(const std::string& run_id) const;
  std::vector<ExperimentRun> list() const;

  const std::filesystem::path& runs_dir() const { return runs_dir_; }

 private:
  template <typename Fn>
  ExperimentRun mutate(const std::string& run_id, Fn&& fn);
  std::filesystem::path run_path(const std::string& run_id) const;
  void write_run(const ExperimentRun& run) const;

  std::filesystem::path runs_dir_;
  VersionedStore& store_;
  Clock clock_;
  mutable std::mutex mu_;
  UlidGenerator ids_;
};

}  // namespace fieldledger

#endif  // FIELDLEDGER_TRACKER_H_
