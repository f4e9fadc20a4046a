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

#ifndef FIELDLEDGER_NETSIM_SIMULATOR_H_
#define FIELDLEDGER_NETSIM_SIMULATOR_H_

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fieldledger/api/server.h"
#include "fieldledger/ingest/service.h"
#include "fieldledger/netsim/scenario.h"

namespace fieldledger::netsim {

// Server side of a simulation.
class IngestEndpoint {
 public:
  virtual ~IngestEndpoint() = default;
  // Throws Error(kServerUnreachable) if the server cannot be contacted.
  virtual void probe() {}
  // status 0 means the request never reached the server.
  virtual api::HttpReply post_batch(const std::string& body, const std::string& idempotency_key,
                                    Millis sim_now) = 0;
  // Every stored event row.
  virtual std::vector<nlohmann::json> stored_events() = 0;
};

// Calls the service directly; the server clock follows simulated time.
class InProcessEndpoint final : public IngestEndpoint {
 public:
  explicit InProcessEndpoint(ingest::IngestionService& service) : service_(service) {}
  api::HttpReply post_batch(const std::string& body, const std::string& idempotency_key, Millis sim_now) override;
  std::vector<nlohmann::json> stored_events() override;

 private:
  ingest::IngestionService& service_;
};

// Talks to a running server over HTTP; the server uses its own clock.
class HttpEndpoint final : public IngestEndpoint {
 public:
  explicit HttpEndpoint(std::string base_url, std::chrono::milliseconds timeout = std::chrono::seconds(30));
  ~HttpEndpoint() override;
  void probe() override;
  api::HttpReply post_batch(const std::string& body, const std::string& idempotency_key, Millis sim_now) override;
  std::vector<nlohmann::json> stored_events() override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct ScenarioReport {
  std::size_t generated = 0;
  std::size_t delivered_unique = 0;
  std::size_t duplicates_detected_serverside = 0;
  std::size_t rejected = 0;
  std::size_t max_queue_depth = 0;
  std::vector<Millis> per_flush_latencies_ms;
  std::size_t final_retained = 0;
  // Diagnostics.
  std::size_t stored_duplicates = 0;
  std::size_t phantom_events = 0;
  std::size_t requests = 0;
  std::size_t requests_lost = 0;
  std::size_t responses_lost = 0;
  std::size_t refused_offline = 0;

  nlohmann::json to_json() const;
  static ScenarioReport from_json(const nlohmann::json& doc);
  // Canonical JSON text; byte-identical for equal reports.
  std::string dump() const;
};

struct SimOptions {
  // Directory for per-device queue files. A fresh temporary directory is
  // created (and removed afterwards) when unset.
  std::optional<std::filesystem::path> work_dir;
};

// Throws Error(kServerUnreachable) when the endpoint probe fails.
ScenarioReport run_scenario(const Scenario& scenario, IngestEndpoint& endpoint, const SimOptions& options = {});

// One event of a scripted device, logged at simulated second `t_s`.
struct ScriptedEvent {
  double t_s = 0;
  std::string user_id;
  std::string kind;
  nlohmann::json payload = nlohmann::json::object();
  std::optional<GeoPoint> location;

  // Lines of {t_s, user_id, kind, payload, location?}. Throws
  // Error(kInvalidArgument) on malformed lines.
  static std::vector<ScriptedEvent> load_ndjson(const std::filesystem::path& path);
};

// Drives a single device through the scenario's connectivity with a fixed
// event script instead of the generated workload. Events that fail local
// validation count as rejected.
ScenarioReport run_script(const Scenario& scenario, const std::vector<ScriptedEvent>& script,
                          IngestEndpoint& endpoint, const SimOptions& options = {});

}  // namespace fieldledger::netsim

#endif  // FIELDLEDGER_NETSIM_SIMULATOR_H_
