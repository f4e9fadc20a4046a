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

#ifndef FIELDLEDGER_INGEST_CURATION_H_
#define FIELDLEDGER_INGEST_CURATION_H_

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fieldledger/store.h"
#include "fieldledger/time.h"

namespace fieldledger::ingest {

inline constexpr std::size_t kMaxNoteLength = 1024;

enum class Verdict { kInvalid, kSuspicious, kCleared };

std::string_view verdict_label(Verdict v) noexcept;
std::optional<Verdict> verdict_from_label(std::string_view label) noexcept;

struct CurationFlag {
  std::string event_id;
  Verdict verdict = Verdict::kSuspicious;
  std::string note;
  std::string actor;
  Millis flagged_at = 0;

  nlohmann::json to_json() const;
  static CurationFlag from_json(const nlohmann::json& doc);
  bool operator==(const CurationFlag&) const = default;
};

// Latest flag per (event_id, actor), replaying rows in commit order. Sorted by
// (event_id, actor).
std::vector<CurationFlag> active_flags(const RowSet& flag_rows);

// Event ids with an active `invalid` verdict from any actor.
std::set<std::string> excluded_event_ids(const RowSet& flag_rows);

}  // namespace fieldledger::ingest

#endif  // FIELDLEDGER_INGEST_CURATION_H_
