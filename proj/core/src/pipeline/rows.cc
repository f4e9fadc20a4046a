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

#include "fieldledger/pipeline/rows.h"

#include <cmath>

#include "fieldledger/error.h"

namespace fieldledger::pipeline {
namespace {

using nlohmann::json;

json measure_value(std::string_view name, double value) {
  if (is_integral_measure(name)) return static_cast<std::int64_t>(std::llround(value));
  return value;
}

SubjectKind subject_from(const json& doc) {
  const auto label = doc.at("subject_kind").get<std::string>();
  if (label == "user") return SubjectKind::kUser;
  if (label == "content") return SubjectKind::kContent;
  throw Error(Errc::kCorruptInput, "unknown subject_kind " + label);
}

}  // namespace

std::string_view subject_kind_label(SubjectKind kind) noexcept {
  return kind == SubjectKind::kUser ? "user" : "content";
}

bool is_integral_measure(std::string_view name) noexcept {
  return name != metric::kActiveMinutes && name != metric::kOfflineEventFraction &&
         name != kpi::kAvgSessionMinutes && name != kpi::kOfflineFraction;
}

std::string_view interaction_type_label(InteractionType type) noexcept {
  switch (type) {
    case InteractionType::kView: return "view";
    case InteractionType::kComplete: return "complete";
    case InteractionType::kPurchase: return "purchase";
  }
  return "view";
}

json MetricRow::to_json() const {
  return {{"subject_kind", subject_kind_label(subject_kind)},
          {"subject_id", subject_id},
          {"date", date},
          {"metric", metric},
          {"value", measure_value(metric, value)}};
}

MetricRow MetricRow::from_json(const json& doc) {
  return {subject_from(doc), doc.at("subject_id").get<std::string>(), doc.at("date").get<std::string>(),
          doc.at("metric").get<std::string>(), doc.at("value").get<double>()};
}

json KpiRow::to_json() const {
  return {{"date", date}, {"kpi", kpi}, {"value", measure_value(kpi, value)}};
}

KpiRow KpiRow::from_json(const json& doc) {
  return {doc.at("date").get<std::string>(), doc.at("kpi").get<std::string>(), doc.at("value").get<double>()};
}

json TraitRow::to_json() const {
  return {{"subject_kind", subject_kind_label(subject_kind)},
          {"subject_id", subject_id},
          {"trait", trait},
          {"value", value}};
}

TraitRow TraitRow::from_json(const json& doc) {
  return {subject_from(doc), doc.at("subject_id").get<std::string>(), doc.at("trait").get<std::string>(),
          doc.at("value")};
}

json InteractionRow::to_json() const {
  return {{"user_id", user_id},
          {"content_id", content_id},
          {"adjusted_ts", adjusted_ts},
          {"interaction_type", interaction_type_label(interaction_type)},
          {"event_id", event_id}};
}

InteractionRow InteractionRow::from_json(const json& doc) {
  InteractionRow r;
  r.user_id = doc.at("user_id").get<std::string>();
  r.content_id = doc.at("content_id").get<std::string>();
  r.adjusted_ts = doc.at("adjusted_ts").get<Millis>();
  const auto type = doc.at("interaction_type").get<std::string>();
  if (type == "view") {
    r.interaction_type = InteractionType::kView;
  } else if (type == "complete") {
    r.interaction_type = InteractionType::kComplete;
  } else if (type == "purchase") {
    r.interaction_type = InteractionType::kPurchase;
  } else {
    throw Error(Errc::kCorruptInput, "unknown interaction_type " + type);
  }
  r.event_id = doc.at("event_id").get<std::string>();
  return r;
}

}  // namespace fieldledger::pipeline
