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

#ifndef FIELDLEDGER_PIPELINE_TRANSFORMS_H_
#define FIELDLEDGER_PIPELINE_TRANSFORMS_H_

#include <cstddef>
#include <span>
#include <vector>

#include "fieldledger/pipeline/rows.h"
#include "fieldledger/schema.h"
#include "fieldledger/store.h"

namespace fieldledger::pipeline {

inline constexpr int kDefaultSessionGapMinutes = 30;

struct Session {
  Millis start = 0;
  Millis end = 0;
  std::size_t event_count = 0;

  Millis duration_ms() const { return end - start; }
  bool operator==(const Session&) const = default;
};

// Decodes stored event rows and drops those with an active `invalid` flag.
// Throws Error(kCorruptInput) on rows that could not have passed ingestion.
std::vector<BehaviorEvent> prepare_events(const RowSet& events, const RowSet& flags,
                                          const SchemaCatalog& catalog);

// `sorted_ts` must be ascending. A gap strictly greater than the threshold
// starts a new session.
std::vector<Session> sessionize(std::span<const Millis> sorted_ts,
                                int gap_minutes = kDefaultSessionGapMinutes);

// Per user per day and per content per day. Sorted by
// (subject_kind, subject_id, date, metric).
std::vector<MetricRow> compute_metrics(std::span<const BehaviorEvent> events,
                                       int gap_minutes = kDefaultSessionGapMinutes);

// One row per (date, kpi) for every date between the first and last active
// day, inclusive. Sorted by (date, kpi).
std::vector<KpiRow> aggregate_kpis(std::span<const MetricRow> metrics);

// Sorted by (subject_kind, subject_id, trait).
std::vector<TraitRow> derive_traits(std::span<const BehaviorEvent> events,
                                    std::span<const MetricRow> metrics);

// Sorted by (adjusted_ts, event_id).
std::vector<InteractionRow> extract_interactions(std::span<const BehaviorEvent> events);

}  // namespace fieldledger::pipeline

#endif  // FIELDLEDGER_PIPELINE_TRANSFORMS_H_
