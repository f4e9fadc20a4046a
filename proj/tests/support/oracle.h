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

#ifndef FIELDLEDGER_TESTS_SUPPORT_ORACLE_H_
#define FIELDLEDGER_TESTS_SUPPORT_ORACLE_H_

// Brute-force reference implementations of the behavior pipelines. They work
// directly on stored rows, share no code with the production transforms and
// favor obviousness over speed.

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "fieldledger/pipeline/rows.h"

namespace fieldledger::test {

struct OracleEvent {
  std::string event_id;
  std::string user_id;
  std::string kind;
  std::int64_t ts = 0;
  bool online = true;
  std::string content_id;  // empty when the payload has no content reference
};

// Stored event rows minus those with an active `invalid` flag.
std::vector<OracleEvent> oracle_events(const std::vector<nlohmann::json>& event_rows,
                                       const std::vector<nlohmann::json>& flag_rows);

std::string oracle_date(std::int64_t utc_ms);

// Sessions over one subject-day with a one-pass scan: (count, total duration ms).
std::pair<int, std::int64_t> oracle_sessions(std::vector<std::int64_t> ts, int gap_minutes = 30);

std::vector<pipeline::MetricRow> oracle_metrics(const std::vector<OracleEvent>& events, int gap_minutes = 30);

// KPIs recomputed from events, not from metrics. Keyed by (date, kpi).
std::map<std::pair<std::string, std::string>, double> oracle_kpis(const std::vector<OracleEvent>& events,
                                                                  int gap_minutes = 30);

std::vector<pipeline::TraitRow> oracle_traits(const std::vector<OracleEvent>& events);

std::vector<pipeline::InteractionRow> oracle_interactions(const std::vector<OracleEvent>& events);

}  // namespace fieldledger::test

#endif  // FIELDLEDGER_TESTS_SUPPORT_ORACLE_H_
