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

#ifndef FIELDLEDGER_PIPELINE_ROWS_H_
#define FIELDLEDGER_PIPELINE_ROWS_H_

// Output families of the behavior pipelines: per-subject daily metrics,
// cross-subject KPIs, per-subject traits, and user-content interactions.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fieldledger/time.h"

namespace fieldledger::pipeline {

enum class SubjectKind { kUser, kContent };

std::string_view subject_kind_label(SubjectKind kind) noexcept;

// Metric registry. Integral metrics serialize as JSON integers.
namespace metric {
inline constexpr std::string_view kEventCount = "event_count";
inline constexpr std::string_view kSessionCount = "session_count";
inline constexpr std::string_view kActiveMinutes = "active_minutes";
inline constexpr std::string_view kContentViews = "content_views";
inline constexpr std::string_view kContentCompletions = "content_completions";
inline constexpr std::string_view kPurchases = "purchases";
inline constexpr std::string_view kOfflineEventFraction = "offline_event_fraction";
inline constexpr std::string_view kViews = "views";
inline constexpr std::string_view kCompletions = "completions";
inline constexpr std::string_view kUniqueViewers = "unique_viewers";
}  // namespace metric

namespace kpi {
inline constexpr std::string_view kDau = "dau";
inline constexpr std::string_view kTotalEvents = "total_events";
inline constexpr std::string_view kTotalPurchases = "total_purchases";
inline constexpr std::string_view kAvgSessionMinutes = "avg_session_minutes";
inline constexpr std::string_view kOfflineFraction = "offline_fraction";
}  // namespace kpi

namespace trait {
inline constexpr std::string_view kFirstSeen = "first_seen";
inline constexpr std::string_view kLastSeen = "last_seen";
inline constexpr std::string_view kDaysActive = "days_active";
inline constexpr std::string_view kFavoriteKind = "favorite_kind";
inline constexpr std::string_view kTotalViews = "total_views";
inline constexpr std::string_view kUniqueViewers = "unique_viewers";
inline constexpr std::string_view kFirstViewed = "first_viewed";
}  // namespace trait

bool is_integral_measure(std::string_view name) noexcept;

// Validated, flag-filtered event as consumed by the transforms.
struct BehaviorEvent {
  std::string event_id;
  std::string user_id;
  std::string kind;
  Millis adjusted_ts = 0;
  bool online = true;
  std::optional<std::string> content_id;
};

struct MetricRow {
  SubjectKind subject_kind = SubjectKind::kUser;
  std::string subject_id;
  std::string date;  // YYYY-MM-DD, UTC day of adjusted_ts
  std::string metric;
  double value = 0;

  nlohmann::json to_json() const;
  static MetricRow from_json(const nlohmann::json& doc);
  bool operator==(const MetricRow&) const = default;
};

struct KpiRow {
  std::string date;
  std::string kpi;
  double value = 0;

  nlohmann::json to_json() const;
  static KpiRow from_json(const nlohmann::json& doc);
  bool operator==(const KpiRow&) const = default;
};

struct TraitRow {
  SubjectKind subject_kind = SubjectKind::kUser;
  std::string subject_id;
  std::string trait;
  nlohmann::json value;

  nlohmann::json to_json() const;
  static TraitRow from_json(const nlohmann::json& doc);
  bool operator==(const TraitRow&) const = default;
};

enum class InteractionType { kView, kComplete, kPurchase };

std::string_view interaction_type_label(InteractionType type) noexcept;

struct InteractionRow {
  std::string user_id;
  std::string content_id;
  Millis adjusted_ts = 0;
  InteractionType interaction_type = InteractionType::kView;
  std::string event_id;

  nlohmann::json to_json() const;
  static InteractionRow from_json(const nlohmann::json& doc);
  bool operator==(const InteractionRow&) const = default;
};

}  // namespace fieldledger::pipeline

#endif  // FIELDLEDGER_PIPELINE_ROWS_H_
