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

#ifndef FIELDLEDGER_INGEST_SERVICE_H_
#define FIELDLEDGER_INGEST_SERVICE_H_

#include <cstddef>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "fieldledger/batch.h"
#include "fieldledger/ingest/curation.h"
#include "fieldledger/schema.h"
#include "fieldledger/store.h"

namespace fieldledger::ingest {

inline constexpr std::string_view kEventsTable = "events";
inline constexpr std::string_view kQuarantineTable = "quarantine";
inline constexpr std::string_view kFlagsTable = "curation_flags";
inline constexpr std::size_t kMaxPageLimit = 1000;

struct IngestOptions {
  std::size_t batch_limit = kDefaultBatchLimit;
  int max_commit_attempts = 10;
};

struct EventFilter {
  std::optional<std::string> user_id;
  std::optional<std::string> kind;
  std::optional<Millis> from;  // inclusive, over adjusted_ts
  std::optional<Millis> to;    // inclusive
  std::optional<bool> online;
};

struct PageRequest {
  std::size_t limit = 100;
  std::optional<std::string> cursor;
};

struct EventPage {
  std::vector<nlohmann::json> events;
  std::optional<std::string> next_cursor;
  Version version = 0;
};

struct QuarantinePage {
  std::vector<nlohmann::json> records;
  std::optional<std::string> next_cursor;
  Version version = 0;
};

struct IngestStats {
  std::size_t batches = 0;
  std::size_t accepted = 0;
  std::size_t duplicates = 0;
  std::size_t rejected = 0;
};

// Platform edge. Accepted events land in `events` (one commit per batch),
// rejects in `quarantine`, curation verdicts in `curation_flags`.
//
// Stored event rows are the canonical envelope plus server-side `adjusted_ts`
// and `app_id`. Quarantine rows are
//   {event_id, received_at, raw, raw_digest, outcome, batch_id, app_id}.
class IngestionService {
 public:
  IngestionService(VersionedStore& store, const SchemaCatalog& catalog, IngestOptions options = {});
  IngestionService(const IngestionService&) = delete;
  IngestionService& operator=(const IngestionService&) = delete;

  // Throws Error(kBatchMalformed) when batch-level invariants fail and
  // Error(kStorageUnavailable) when the store cannot be written.
  BatchResponse ingest_batch(const nlohmann::json& request, Millis server_now,
                             std::string_view idempotency_key = {});
  BatchResponse ingest_body(std::string_view body, Millis server_now,
                            std::string_view idempotency_key = {});

  // Throws Error(kBadFilter).
  EventPage query_events(const EventFilter& filter, const PageRequest& page) const;
  QuarantinePage list_quarantine(const PageRequest& page) const;

  // Throws Error(kNotFound) for ids in neither events nor quarantine.
  CurationFlag flag_record(const std::string& event_id, Verdict verdict, std::string note,
                           std::string actor, Millis server_now);
  std::vector<CurationFlag> flags(const std::optional<std::string>& event_id) const;

  IngestStats stats() const;
  VersionedStore& store() const { return store_; }
  const SchemaCatalog& catalog() const { return catalog_; }

 private:
  void refresh_events_index() const;
  void refresh_quarantine_index() const;

  VersionedStore& store_;
  const SchemaCatalog& catalog_;
  IngestOptions options_;

  std::mutex ingest_mu_;
  mutable std::mutex index_mu_;
  mutable Version events_indexed_ = 0;
  mutable std::unordered_set<std::string> accepted_keys_;  // app_id \x1f event_id
  mutable std::unordered_set<std::string> known_event_ids_;
  mutable Version quarantine_indexed_ = 0;
  mutable std::unordered_set<std::string> quarantine_keys_;  // app_id \x1f raw digest
  mutable std::unordered_set<std::string> quarantine_ids_;

  mutable std::mutex stats_mu_;
  IngestStats stats_;
};

}  // namespace fieldledger::ingest

#endif  // FIELDLEDGER_INGEST_SERVICE_H_
