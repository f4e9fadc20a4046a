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

#include "test_support.h"

#include <stdlib.h>

#include <algorithm>
#include <random>
#include <stdexcept>

#include "fieldledger/event.h"

namespace fieldledger::test {

using nlohmann::json;
namespace fs = std::filesystem;

TempDir::TempDir() {
  std::string tmpl = (fs::temp_directory_path() / "fieldledger-test-XXXXXX").string();
  if (!::mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

json wire_event(const std::string& event_id, const std::string& user_id, const std::string& kind, Millis utc_ms,
                json payload, bool online, int offset_minutes) {
  json conn = online ? json{{"online", true}, {"network_type", "wifi"}, {"speed_kbps", 512.0}}
                     : json{{"online", false}, {"network_type", "offline"}};
  return {{"event_id", event_id},
          {"user_id", user_id},
          {"kind", kind},
          {"client_ts", format_instant(utc_ms, offset_minutes)},
          {"connectivity", conn},
          {"sdk_version", "1.0.0"},
          {"schema_version", 1},
          {"payload", std::move(payload)}};
}

json valid_payload(const std::string& kind, const std::string& content_id) {
  if (kind == "page_view") return {{"page_id", "home"}};
  if (kind == "content_view") return {{"content_id", content_id}, {"duration_ms", 1200}};
  if (kind == "content_complete") return {{"content_id", content_id}, {"passed", true}};
  if (kind == "purchase") return {{"item_id", "i1"}, {"amount", 4.99}, {"currency", "EUR"}};
  if (kind == "search") return {{"query", "algebra"}};
  if (kind == "custom") return {{"name", "tap"}};
  return json::object();
}

json batch_request(const std::string& batch_id, const std::vector<json>& events, Millis sent_utc_ms,
                   const std::string& app_id) {
  return {{"batch_id", batch_id},
          {"app_id", app_id},
          {"device_id", "dev-1"},
          {"sent_ts", format_instant(sent_utc_ms, 0)},
          {"events", events}};
}

std::vector<json> random_corpus(const CorpusOptions& o) {
  static const char* kKinds[] = {"page_view", "content_view", "content_complete", "purchase",
                                 "search",    "session_start", "session_end",     "custom"};
  static const int kOffsets[] = {0, 60, 120, -300, 330, -480};
  std::mt19937_64 rng(o.seed);
  UlidGenerator ids(o.seed ^ 0x5eedULL);
  const Millis span = static_cast<Millis>(o.n_days) * 86'400'000;
  std::vector<json> out;
  out.reserve(o.n_events);
  for (std::size_t i = 0; i < o.n_events; ++i) {
    const Millis ts = o.start_ms + static_cast<Millis>(rng() % static_cast<std::uint64_t>(span));
    const std::string kind = kKinds[rng() % 8];
    const std::string user = "u" + std::to_string(rng() % static_cast<std::uint64_t>(o.n_users));
    const std::string content = "c" + std::to_string(rng() % static_cast<std::uint64_t>(o.n_contents));
    const bool online = static_cast<double>(rng() % 1'000'000) / 1e6 >= o.offline_prob;
    const int offset = kOffsets[rng() % 6];
    json payload = valid_payload(kind, content);
    if (kind == "purchase" && rng() % 2 == 0) payload["content_id"] = content;
    out.push_back(wire_event(ids.next(ts).str(), user, kind, ts, std::move(payload), online, offset));
  }
  return out;
}

std::vector<BatchResponse> ingest_all(ingest::IngestionService& service, const std::vector<json>& events,
                                      std::size_t batch_size, std::uint64_t seed) {
  UlidGenerator ids(seed);
  std::vector<BatchResponse> out;
  for (std::size_t i = 0; i < events.size(); i += batch_size) {
    const std::size_t end = std::min(events.size(), i + batch_size);
    std::vector<json> batch(events.begin() + static_cast<std::ptrdiff_t>(i),
                            events.begin() + static_cast<std::ptrdiff_t>(end));
    Millis sent = 0;
    for (const auto& e : batch) {
      if (const auto p = parse_instant(e.value("client_ts", std::string()))) sent = std::max(sent, p->utc_ms);
    }
    out.push_back(service.ingest_batch(batch_request(ids.next(sent).str(), batch, sent), sent));
  }
  return out;
}

}  // namespace fieldledger::test
