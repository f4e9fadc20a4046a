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

#include "fieldledger/ingest/service.h"

#include <algorithm>
#include <filesystem>
#include <tuple>

#include "fieldledger/digest.h"
#include "fieldledger/error.h"
#include "fieldledger/event.h"
#include "fieldledger/ulid.h"
#include "fieldledger/validation.h"

namespace fieldledger::ingest {
namespace {

using nlohmann::json;

std::string key_of(std::string_view app_id, std::string_view id) {
  std::string k(app_id);
  k += '\x1f';
  k += id;
  return k;
}

std::string hex_encode(std::string_view in) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(in.size() * 2);
  for (unsigned char c : in) {
    out.push_back(kHex[c >> 4]);
    out.push_back(kHex[c & 0xF]);
  }
  return out;
}

std::optional<std::string> hex_decode(std::string_view in) {
  if (in.size() % 2 != 0) return std::nullopt;
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
  };
  std::string out;
  for (std::size_t i = 0; i < in.size(); i += 2) {
    const int hi = nibble(in[i]), lo = nibble(in[i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    out.push_back(static_cast<char>(hi << 4 | lo));
  }
  return out;
}

// Cursors are opaque to clients: hex of a small JSON document that pins the
// store version and the resumption point.
std::string make_cursor(const json& state) { return hex_encode(state.dump()); }

json read_cursor(const std::string& cursor) {
  const auto raw = hex_decode(cursor);
  json doc = raw ? json::parse(*raw, nullptr, false) : json();
  if (!raw || doc.is_discarded() || !doc.is_object()) throw Error(Errc::kBadFilter, "malformed cursor");
  return doc;
}

[[noreturn]] void malformed(const std::string& message) { throw Error(Errc::kBatchMalformed, message); }

template <typename Fn>
auto storage_guard(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const std::filesystem::filesystem_error& e) {
    throw Error(Errc::kStorageUnavailable, e.what());
  }
}

}  // namespace

IngestionService::IngestionService(VersionedStore& store, const SchemaCatalog& catalog,
                                   IngestOptions options)
    : store_(store), catalog_(catalog), options_(options) {
  refresh_events_index();
  refresh_quarantine_index();
}

void IngestionService::refresh_events_index() const {
  Table& table = store_.table(kEventsTable);
  std::lock_guard lock(index_mu_);
  const Version latest = table.latest_version();
  for (Version v = events_indexed_ + 1; v <= latest; ++v) {
    for (const auto& row : table.read_commit(v).rows) {
      const std::string id = row.at("event_id").get<std::string>();
      accepted_keys_.insert(key_of(row.value("app_id", ""), id));
      known_event_ids_.insert(id);
    }
  }
  events_indexed_ = std::max(events_indexed_, latest);
}

void IngestionService::refresh_quarantine_index() const {
  Table& table = store_.table(kQuarantineTable);
  std::lock_guard lock(index_mu_);
  const Version latest = table.latest_version();
  for (Version v = quarantine_indexed_ + 1; v <= latest; ++v) {
    for (const auto& row : table.read_commit(v).rows) {
      quarantine_keys_.insert(key_of(row.value("app_id", ""), row.at("raw_digest").get<std::string>()));
      quarantine_ids_.insert(row.value("event_id", ""));
    }
  }
  quarantine_indexed_ = std::max(quarantine_indexed_, latest);
}

BatchResponse IngestionService::ingest_body(std::string_view body, Millis server_now,
                                            std::string_view idempotency_key) {
  json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded()) malformed("request body is not valid JSON");
  return ingest_batch(doc, server_now, idempotency_key);
}

BatchResponse IngestionService::ingest_batch(const json& request, Millis server_now,
                                             std::string_view idempotency_key) {
  if (!request.is_object()) malformed("batch must be a JSON object");
  for (const char* key : {"batch_id", "app_id", "device_id", "sent_ts"}) {
    if (!request.contains(key) || !request[key].is_string()) {
      malformed(std::string(key) + " must be a string");
    }
  }
  const std::string batch_id = request["batch_id"].get<std::string>();
  const std::string app_id = request["app_id"].get<std::string>();
  if (!is_valid_ulid(batch_id)) malformed("batch_id is not a ULID");
  if (app_id.empty()) malformed("app_id must be non-empty");
  const auto sent = parse_instant(request["sent_ts"].get_ref<const std::string&>());
  if (!sent) malformed("sent_ts is not an ISO-8601 instant with offset");
  if (!request.contains("events") || !request["events"].is_array()) malformed("events must be an array");
  const json& events = request["events"];
  if (events.empty() || events.size() > options_.batch_limit) {
    malformed("events must hold 1.." + std::to_string(options_.batch_limit) + " entries");
  }
  for (const json& e : events) {
    if (!e.is_object() || !e.contains("client_ts") || !e["client_ts"].is_string()) continue;
    if (const auto ts = parse_instant(e["client_ts"].get_ref<const std::string&>())) {
      if (ts->utc_ms > sent->utc_ms + kSentTsTolerance) {
        malformed("event client_ts is later than sent_ts + 60 s");
      }
    }
  }

  const std::int64_t skew_ms = server_now - sent->utc_ms;

  struct Pending {
    std::size_t index;
    std::string event_id;
    json doc;
  };
  std::vector<Pending> valid;
  std::vector<Pending> invalid;
  BatchResponse response;
  response.results.resize(events.size());

  for (std::size_t i = 0; i < events.size(); ++i) {
    const json& raw = events[i];
    auto& result = response.results[i];
    if (raw.is_object() && raw.contains("event_id") && raw["event_id"].is_string()) {
      result.event_id = raw["event_id"].get<std::string>();
    }
    ValidationOutcome outcome = validate_event(raw, catalog_);
    if (outcome.accepted()) {
      EventEnvelope env = envelope_from_json(raw);
      env.adjusted_ts = normalize_timestamp(env.client_ts, skew_ms);
      if (env.location) env.location = normalize_location(env.location->lat, env.location->lon);
      json doc = to_json(env);
      doc["app_id"] = app_id;
      valid.push_back({i, env.event_id, std::move(doc)});
    } else {
      const std::string raw_text = canonical_dump(raw);
      json record = {{"event_id", result.event_id},
                     {"received_at", server_now},
                     {"raw", raw_text},
                     {"raw_digest", sha256_hex(raw_text)},
                     {"outcome", outcome.to_json()},
                     {"batch_id", batch_id},
                     {"app_id", app_id}};
      result.status = EventStatus::kRejected;
      result.errors = std::move(outcome.errors);
      invalid.push_back({i, result.event_id, std::move(record)});
    }
  }

  json op_meta = {{"op", "ingest"},
                  {"batch_id", batch_id},
                  {"app_id", app_id},
                  {"device_id", request["device_id"]},
                  {"skew_ms", skew_ms},
                  {"received_at", server_now}};
  if (!idempotency_key.empty()) op_meta["idempotency_key"] = std::string(idempotency_key);

  std::lock_guard ingest_lock(ingest_mu_);
  storage_guard([&] {
    Table& events_table = store_.table(kEventsTable);
    for (int attempt = 0;; ++attempt) {
      if (attempt >= options_.max_commit_attempts) {
        throw Error(Errc::kStorageUnavailable, "events commit kept conflicting");
      }
      refresh_events_index();
      std::vector<json> rows;
      std::unordered_set<std::string> in_batch;
      Version expected;
      {
        std::lock_guard lock(index_mu_);
        expected = events_indexed_;
        for (const auto& p : valid) {
          const std::string k = key_of(app_id, p.event_id);
          const bool dup = accepted_keys_.count(k) || !in_batch.insert(k).second;
          response.results[p.index].status = dup ? EventStatus::kDuplicate : EventStatus::kAccepted;
          if (!dup) rows.push_back(p.doc);
        }
      }
      if (rows.empty()) break;
      try {
        events_table.commit(rows, expected, op_meta);
      } catch (const Error& e) {
        if (e.code() == Errc::kVersionConflict) continue;
        throw;
      }
      refresh_events_index();
      break;
    }

    Table& quarantine = store_.table(kQuarantineTable);
    for (int attempt = 0;; ++attempt) {
      if (attempt >= options_.max_commit_attempts) {
        throw Error(Errc::kStorageUnavailable, "quarantine commit kept conflicting");
      }
      refresh_quarantine_index();
      std::vector<json> rows;
      std::unordered_set<std::string> in_batch;
      Version expected;
      {
        std::lock_guard lock(index_mu_);
        expected = quarantine_indexed_;
        for (const auto& p : invalid) {
          const std::string k = key_of(app_id, p.doc["raw_digest"].get<std::string>());
          auto& result = response.results[p.index];
          if (quarantine_keys_.count(k) || !in_batch.insert(k).second) {
            result.status = EventStatus::kDuplicate;
            result.errors.clear();
          } else {
            rows.push_back(p.doc);
          }
        }
      }
      if (rows.empty()) break;
      try {
        quarantine.commit(rows, expected, op_meta);
      } catch (const Error& e) {
        if (e.code() == Errc::kVersionConflict) continue;
        throw;
      }
      refresh_quarantine_index();
      break;
    }
  });

  std::lock_guard lock(stats_mu_);
  ++stats_.batches;
  stats_.accepted += response.count(EventStatus::kAccepted);
  stats_.duplicates += response.count(EventStatus::kDuplicate);
  stats_.rejected += response.count(EventStatus::kRejected);
  return response;
}

EventPage IngestionService::query_events(const EventFilter& filter, const PageRequest& page) const {
  if (filter.kind && !catalog_.find(*filter.kind)) throw Error(Errc::kBadFilter, "unknown kind " + *filter.kind);
  if (filter.from && filter.to && *filter.from > *filter.to) throw Error(Errc::kBadFilter, "from > to");
  if (page.limit == 0 || page.limit > kMaxPageLimit) throw Error(Errc::kBadFilter, "limit must be 1..1000");

  Table& table = store_.table(kEventsTable);
  EventPage out;
  std::optional<std::pair<Millis, std::string>> after;
  if (page.cursor) {
    const json c = read_cursor(*page.cursor);
    try {
      out.version = c.at("v").get<Version>();
      after.emplace(c.at("ts").get<Millis>(), c.at("id").get<std::string>());
    } catch (const json::exception&) {
      throw Error(Errc::kBadFilter, "malformed cursor");
    }
    if (out.version < 0 || out.version > table.latest_version()) throw Error(Errc::kBadFilter, "stale cursor");
  } else {
    out.version = table.latest_version();
  }

  RowSet rows = storage_guard([&] { return table.read_at(out.version); });
  std::vector<std::pair<std::pair<Millis, std::string>, json*>> matches;
  for (auto& row : rows.rows) {
    if (filter.user_id && row.at("user_id") != *filter.user_id) continue;
    if (filter.kind && row.at("kind") != *filter.kind) continue;
    const Millis ts = row.at("adjusted_ts").get<Millis>();
    if (filter.from && ts < *filter.from) continue;
    if (filter.to && ts > *filter.to) continue;
    if (filter.online && row.at("connectivity").at("online").get<bool>() != *filter.online) continue;
    auto key = std::make_pair(ts, row.at("event_id").get<std::string>());
    if (after && !(*after < key)) continue;
    matches.emplace_back(std::move(key), &row);
  }
  std::sort(matches.begin(), matches.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  const std::size_t n = std::min(page.limit, matches.size());
  for (std::size_t i = 0; i < n; ++i) out.events.push_back(std::move(*matches[i].second));
  if (matches.size() > n) {
    const auto& last = matches[n - 1].first;
    out.next_cursor = make_cursor({{"v", out.version}, {"ts", last.first}, {"id", last.second}});
  }
  return out;
}

QuarantinePage IngestionService::list_quarantine(const PageRequest& page) const {
  if (page.limit == 0 || page.limit > kMaxPageLimit) throw Error(Errc::kBadFilter, "limit must be 1..1000");
  Table& table = store_.table(kQuarantineTable);
  QuarantinePage out;
  std::size_t offset = 0;
  if (page.cursor) {
    const json c = read_cursor(*page.cursor);
    try {
      out.version = c.at("v").get<Version>();
      offset = c.at("offset").get<std::size_t>();
    } catch (const json::exception&) {
      throw Error(Errc::kBadFilter, "malformed cursor");
    }
    if (out.version < 0 || out.version > table.latest_version()) throw Error(Errc::kBadFilter, "stale cursor");
  } else {
    out.version = table.latest_version();
  }
  RowSet rows = storage_guard([&] { return table.read_at(out.version); });
  std::stable_sort(rows.rows.begin(), rows.rows.end(), [](const json& a, const json& b) {
    return a.at("received_at").get<Millis>() < b.at("received_at").get<Millis>();
  });
  const std::size_t end = std::min(rows.rows.size(), offset + page.limit);
  for (std::size_t i = offset; i < end; ++i) out.records.push_back(std::move(rows.rows[i]));
  if (end < rows.rows.size()) out.next_cursor = make_cursor({{"v", out.version}, {"offset", end}});
  return out;
}

CurationFlag IngestionService::flag_record(const std::string& event_id, Verdict verdict, std::string note,
                                           std::string actor, Millis server_now) {
  if (note.size() > kMaxNoteLength) throw Error(Errc::kInvalidArgument, "note exceeds 1024 chars");
  if (actor.empty()) throw Error(Errc::kInvalidArgument, "actor must be non-empty");
  storage_guard([&] {
    refresh_events_index();
    refresh_quarantine_index();
  });
  {
    std::lock_guard lock(index_mu_);
    if (!known_event_ids_.count(event_id) && !quarantine_ids_.count(event_id)) {
      throw Error(Errc::kNotFound, "no event " + event_id);
    }
  }
  CurationFlag flag{event_id, verdict, std::move(note), std::move(actor), server_now};
  const json row = flag.to_json();
  storage_guard([&] {
    Table& table = store_.table(kFlagsTable);
    for (int attempt = 0; attempt < options_.max_commit_attempts; ++attempt) {
      try {
        table.commit(std::span<const json>(&row, 1), table.latest_version(),
                     {{"op", "flag"}, {"event_id", event_id}});
        return;
      } catch (const Error& e) {
        if (e.code() != Errc::kVersionConflict) throw;
      }
    }
    throw Error(Errc::kStorageUnavailable, "curation flag commit kept conflicting");
  });
  return flag;
}

std::vector<CurationFlag> IngestionService::flags(const std::optional<std::string>& event_id) const {
  Table& table = store_.table(kFlagsTable);
  const RowSet rows = storage_guard([&] { return table.read_at(table.latest_version()); });
  std::vector<CurationFlag> out;
  for (auto& f : active_flags(rows)) {
    if (!event_id || f.event_id == *event_id) out.push_back(std::move(f));
  }
  return out;
}

IngestStats IngestionService::stats() const {
  std::lock_guard lock(stats_mu_);
  return stats_;
}

}  // namespace fieldledger::ingest
