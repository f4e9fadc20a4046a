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

#ifndef FIELDLEDGER_PIPELINE_RUNNER_H_
#define FIELDLEDGER_PIPELINE_RUNNER_H_

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fieldledger/error.h"
#include "fieldledger/pipeline/checks.h"
#include "fieldledger/pipeline/transforms.h"
#include "fieldledger/schema.h"
#include "fieldledger/store.h"
#include "fieldledger/tracker.h"

namespace fieldledger::pipeline {

inline constexpr const char* kUserMetricsTable = "user_metrics";
inline constexpr const char* kContentMetricsTable = "content_metrics";
inline constexpr const char* kKpisTable = "kpis";
inline constexpr const char* kTraitsTable = "traits";
inline constexpr const char* kInteractionsTable = "interactions";
inline constexpr const char* kOutputTables[] = {kUserMetricsTable, kContentMetricsTable, kKpisTable,
                                                kTraitsTable, kInteractionsTable};

// Called after a stage materializes its output and before its checks run.
using StageHook = std::function<void(Stage, StageOutputs&)>;

struct PipelineOptions {
  std::optional<Version> events_version;  // latest when unset
  std::optional<Version> flags_version;   // latest when unset; 0 means no flags
  int session_gap_minutes = kDefaultSessionGapMinutes;
  std::string run_name = "behavior-pipeline";
  StageHook stage_hook;
};

struct PipelineRun {
  std::string run_id;
  Version events_version = 0;
  Version flags_version = 0;
  std::map<std::string, Version> outputs;  // tables with no rows are not committed
  Millis started_at = 0;
  Millis finished_at = 0;
  std::vector<CheckReport> reports;

  nlohmann::json to_json() const;
};

class ChecksFailed : public Error {
 public:
  ChecksFailed(std::string run_id, CheckReport report);
  const std::string& run_id() const { return run_id_; }
  const CheckReport& report() const { return report_; }

 private:
  std::string run_id_;
  CheckReport report_;
};

// Runs every stage in memory with checks, without touching the store.
struct ComputedPipeline {
  std::vector<BehaviorEvent> events;
  StageOutputs outputs;
  std::vector<CheckReport> reports;
  std::optional<Stage> failed_stage;
};

ComputedPipeline compute_pipeline(const RowSet& events, const RowSet& flags, const SchemaCatalog& catalog,
                                  Millis run_start, int session_gap_minutes = kDefaultSessionGapMinutes,
                                  const StageHook& hook = {});

// Output rows in table order, as committed.
std::map<std::string, std::vector<nlohmann::json>> output_rows(const StageOutputs& outputs);

// Throws Error(kUnknownVersion) for missing input versions, ChecksFailed when
// a stage fails, and Error(kVersionConflict) when another writer committed to
// an output table during the run.
PipelineRun run_pipeline(VersionedStore& store, ExperimentTracker& tracker, const SchemaCatalog& catalog,
                         const PipelineOptions& options = {});

}  // namespace fieldledger::pipeline

#endif  // FIELDLEDGER_PIPELINE_RUNNER_H_
