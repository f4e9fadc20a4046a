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

#ifndef FIELDLEDGER_SDK_CLIENT_H_
#define FIELDLEDGER_SDK_CLIENT_H_

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include <json.hpp>

#include "fieldledger/error.h"
#include "fieldledger/event.h"
#include "fieldledger/schema.h"
#include "fieldledger/sdk/backoff.h"
#include "fieldledger/sdk/durable_queue.h"
#include "fieldledger/sdk/speed_estimator.h"
#include "fieldledger/sdk/transport.h"
#include "fieldledger/ulid.h"
#include "fieldledger/validation.h"

namespace fieldledger::sdk {

inline constexpr std::string_view kSdkVersion = "1.0.0";

struct SdkOptions {
  std::string app_id = "app";
  std::string device_id = "device";
  int device_offset_minutes = 0;
  std::int64_t device_clock_skew_ms = 0;  // device clock minus true time
  std::size_t batch_limit = kDefaultBatchLimit;
  std::size_t batch_bytes_limit = kDefaultBatchBytesLimit;
  BackoffPolicy backoff;
  double speed_alpha = 0.3;
  std::uint64_t seed = 0;
  std::string sdk_version = std::string(kSdkVersion);
  QueueOptions queue;
};

struct FlushReport {
  std::size_t attempted = 0;
  std::size_t accepted = 0;
  std::size_t duplicates = 0;
  std::size_t rejected = 0;
  std::size_t retained = 0;
  std::optional<Millis> next_retry_after_ms;
  std::size_t requests = 0;
  Millis elapsed_ms = 0;

  nlohmann::json to_json() const;
};

class LocalValidationFailed : public Error {
 public:
  explicit LocalValidationFailed(ValidationOutcome outcome);
  const ValidationOutcome& outcome() const { return outcome_; }

 private:
  ValidationOutcome outcome_;
};

// The in-app library. log_event may be called from any thread; flush runs
// one at a time (a concurrent second call returns a no-op report).
class SdkClient {
 public:
  SdkClient(std::filesystem::path queue_path, SdkOptions options,
            const SchemaCatalog& catalog = SchemaCatalog::builtin());

  // Throws Error(kQueueFull) or LocalValidationFailed; nothing is enqueued
  // in either case. Connectivity is embedded as given, with the current
  // speed estimate filled in for online events lacking one.
  EventEnvelope log_event(EventKind kind, nlohmann::json payload, const std::string& user_id,
                          Millis now, ConnectivityInfo connectivity,
                          std::optional<GeoPoint> location = std::nullopt);

  FlushReport flush(BatchTransport& transport, Millis now, const ConnectivityInfo& connectivity);

  std::size_t queue_length() const { return queue_->size(); }
  DurableQueue& queue() { return *queue_; }
  const DurableQueue& queue() const { return *queue_; }
  std::optional<double> speed_kbps() const;
  std::optional<Millis> retry_at() const;
  const SdkOptions& options() const { return options_; }

 private:
  std::string device_time(Millis now) const;

  SdkOptions options_;
  const SchemaCatalog& catalog_;
  std::unique_ptr<DurableQueue> queue_;

  mutable std::mutex mu_;
  UlidGenerator ids_;
  SpeedEstimator speed_;
  Backoff backoff_;
  std::optional<Millis> retry_at_;
  std::atomic<bool> flushing_{false};
};

}  // namespace fieldledger::sdk

#endif  // FIELDLEDGER_SDK_CLIENT_H_
