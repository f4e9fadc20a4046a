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

#ifndef FIELDLEDGER_API_SERVER_H_
#define FIELDLEDGER_API_SERVER_H_

// HTTP/JSON surface of the ingestion service.
//
//   POST /v1/events:batch                  batch upload (Idempotency-Key header)
//   GET  /v1/events                        user_id, kind, from, to, online, limit, cursor
//   GET  /v1/quarantine                    limit, cursor
//   POST /v1/curation/flags                {event_id, verdict, note, actor}
//   GET  /v1/curation/flags                event_id
//   GET  /v1/tables                        table names
//   GET  /v1/tables/{name}/versions        commit history
//   GET  /v1/tables/{name}/rows            version, scope=snapshot|commit
//   GET  /v1/runs, /v1/runs/{id}           experiment runs
//   GET  /console/...                      static files, when configured
//
// Errors are {"error": <code>, "message": <text>}.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "fieldledger/error.h"
#include "fieldledger/ingest/service.h"
#include "fieldledger/time.h"
#include "fieldledger/tracker.h"

namespace fieldledger::api {

struct HttpReply {
  int status = 200;
  std::string body;
};

int http_status_for(Errc code) noexcept;
std::string error_body(Errc code, std::string_view message);

// The batch endpoint without the socket: used by the server and by in-process
// simulations so both share status mapping.
HttpReply handle_batch_post(ingest::IngestionService& service, std::string_view body,
                            std::string_view idempotency_key, Millis server_now);

struct ApiOptions {
  std::optional<std::filesystem::path> console_dir;
  Clock clock = system_now_ms;
  int worker_threads = 8;
};

class ApiServer {
 public:
  // `tracker` may be null, in which case the run endpoints answer 404.
  ApiServer(ingest::IngestionService& service, ExperimentTracker* tracker, ApiOptions options = {});
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  // Binds and serves on a background thread. Port 0 picks a free port.
  // Returns the bound port; throws Error(kStorageUnavailable) if binding fails.
  int start(const std::string& host, int port);
  // Binds and serves on the calling thread until stop().
  void run(const std::string& host, int port);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace fieldledger::api

#endif  // FIELDLEDGER_API_SERVER_H_
