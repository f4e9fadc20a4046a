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

#include "fieldledger/ingest/curation.h"

#include <map>
#include <utility>

#include "fieldledger/error.h"

namespace fieldledger::ingest {

std::string_view verdict_label(Verdict v) noexcept {
  switch (v) {
    case Verdict::kInvalid: return "invalid";
    case Verdict::kSuspicious: return "suspicious";
    case Verdict::kCleared: return "cleared";
  }
  return "suspicious";
}

std::optional<Verdict> verdict_from_label(std::string_view label) noexcept {
  for (auto v : {Verdict::kInvalid, Verdict::kSuspicious, Verdict::kCleared}) {
    if (verdict_label(v) == label) return v;
  }
  return std::nullopt;
}

nlohmann::json CurationFlag::to_json() const {
  return {{"event_id", event_id}, {"verdict", verdict_label(verdict)}, {"note", note},
          {"actor", actor},       {"flagged_at", flagged_at}};
}

CurationFlag CurationFlag::from_json(const nlohmann::json& doc) {
  CurationFlag f;
  f.event_id = doc.at("event_id").get<std::string>();
  const auto v = verdict_from_label(doc.at("verdict").get<std::string>());
  if (!v) throw Error(Errc::kCorruptInput, "unknown verdict in flag row");
  f.verdict = *v;
  f.note = doc.value("note", "");
  f.actor = doc.at("actor").get<std::string>();
  f.flagged_at = doc.value("flagged_at", Millis{0});
  return f;
}

std::vector<CurationFlag> active_flags(const RowSet& flag_rows) {
  std::map<std::pair<std::string, std::string>, CurationFlag> latest;
  for (const auto& row : flag_rows.rows) {
    CurationFlag f = CurationFlag::from_json(row);
    auto key = std::make_pair(f.event_id, f.actor);
    latest[std::move(key)] = std::move(f);
  }
  std::vector<CurationFlag> out;
  out.reserve(latest.size());
  for (auto& [_, f] : latest) out.push_back(std::move(f));
  return out;
}

std::set<std::string> excluded_event_ids(const RowSet& flag_rows) {
  std::set<std::string> out;
  for (const auto& f : active_flags(flag_rows)) {
    if (f.verdict == Verdict::kInvalid) out.insert(f.event_id);
  }
  return out;
}

}  // namespace fieldledger::ingest
