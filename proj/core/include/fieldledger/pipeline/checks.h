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

#ifndef FIELDLEDGER_PIPELINE_CHECKS_H_
#define FIELDLEDGER_PIPELINE_CHECKS_H_

// Data-quality rules evaluated on each stage's materialized output.
//
//   R1  empty subject / user / content ids              error
//   R2  input adjusted_ts outside [2015-01-01, start+24h] warn
//   R3  duplicate output keys                            error
//   R4  per-date total_events != sum of event_count      error
//   R5  interaction event_id absent from input           error
//   R6  more interactions than input events              error

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fieldledger/pipeline/rows.h"

namespace fieldledger::pipeline {

inline constexpr std::size_t kMaxSampleOffenders = 10;
inline constexpr Millis kEarliestPlausibleTs = 1'420'070'400'000;  // 2015-01-01T00:00:00Z

enum class Stage { kMetrics, kKpis, kTraits, kInteractions };
inline constexpr Stage kAllStages[] = {Stage::kMetrics, Stage::kKpis, Stage::kTraits, Stage::kInteractions};

std::string_view stage_name(Stage stage) noexcept;

enum class Severity { kWarn, kError };
enum class CheckVerdict { kPass, kPassWithWarnings, kFail };

std::string_view severity_label(Severity s) noexcept;
std::string_view verdict_label(CheckVerdict v) noexcept;

struct Finding {
  std::string rule_id;
  Severity severity = Severity::kWarn;
  std::size_t count = 0;
  std::vector<std::string> samples;  // at most kMaxSampleOffenders
};

struct CheckReport {
  std::string stage;
  std::vector<Finding> findings;

  CheckVerdict verdict() const;
  const Finding* find(std::string_view rule_id) const;

  nlohmann::json to_json() const;
  static CheckReport from_json(const nlohmann::json& doc);
};

struct StageOutputs {
  std::vector<MetricRow> metrics;
  std::vector<KpiRow> kpis;
  std::vector<TraitRow> traits;
  std::vector<InteractionRow> interactions;
};

CheckReport run_checks(Stage stage, std::span<const BehaviorEvent> inputs, const StageOutputs& outputs,
                       Millis run_start);

}  // namespace fieldledger::pipeline

#endif  // FIELDLEDGER_PIPELINE_CHECKS_H_
