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

#include "fieldledger/sdk/client.h"

namespace fieldledger::sdk {
namespace {

using nlohmann::json;

std::string describe(const ValidationOutcome& outcome) {
  std::string msg = "event failed local validation:";
  for (const auto& e : outcome.errors) {
    msg += " ";
    msg += validation_code_label(e.code);
    msg += "@" + e.path;
  }
  return msg;
}

}  // namespace

json FlushReport::to_json() const {
  json doc = {{"attempted", attempted}, {"accepted", accepted}, {"duplicates", duplicates},
              {"rejected", rejected},   {"retained", retained}, {"requests", requests},
              {"elapsed_ms", elapsed_ms}};
  if (next_retry_after_ms) doc["next_retry_after_ms"] = *next_retry_after_ms;
  return doc;
}

LocalValidationFailed::LocalValidationFailed(ValidationOutcome outcome)
    : Error(Errc::kLocalValidationFailed, describe(outcome)), outcome_(std::move(outcome)) {}

SdkClient::SdkClient(std::filesystem::path queue_path, SdkOptions options,
                     const SchemaCatalog& catalog)
    : options_(std::move(options)),
      catalog_(catalog),
      queue_(restore_queue(queue_path, options_.queue)),
      ids_(options_.seed),
      speed_(options_.speed_alpha),
      backoff_(options_.backoff, options_.seed ^ 0x9E3779B97F4A7C15ull) {
  if (options_.batch_limit == 0) throw Error(Errc::kInvalidArgument, "batch_limit must be positive");
}

std::string SdkClient::device_time(Millis now) const {
  return format_instant(now + options_.device_clock_skew_ms, options_.device_offset_minutes);
}

std::optional<double> SdkClient::speed_kbps() const {
  std::lock_guard lock(mu_);
  return speed_.kbps();
}

std::optional<Millis> SdkClient::retry_at() const {
  std::lock_guard lock(mu_);
  return retry_at_;
}

EventEnvelope SdkClient::log_event(EventKind kind, json payload, const std::string& user_id,
                                   Millis now, ConnectivityInfo connectivity,
                                   std::optional<GeoPoint> location) {
  if (queue_->size() >= queue_->capacity()) {
    throw Error(Errc::kQueueFull, "queue at capacity " + std::to_string(queue_->capacity()));
  }
  EventEnvelope e;
  e.user_id = user_id;
  e.kind = std::string(kind_label(kind));
  e.client_ts = device_time(now);
  if (location) e.location = normalize_location(location->lat, location->lon);
  if (!connectivity.online) {
    connectivity = ConnectivityInfo::offline();
  }
  e.sdk_version = options_.sdk_version;
  if (const auto* def = catalog_.find(e.kind)) e.schema_version = def->version;
  e.payload = payload.is_null() ? json::object() : std::move(payload);
  {
    std::lock_guard lock(mu_);
    if (connectivity.online && !connectivity.speed_kbps) connectivity.speed_kbps = speed_.kbps();
    e.event_id = ids_.next(now).str();
  }
  e.connectivity = connectivity;

  ValidationOutcome outcome = validate_event(e, catalog_);
  if (!outcome.accepted()) throw LocalValidationFailed(std::move(outcome));
  queue_->append(e);
  return e;
}

FlushReport SdkClient::flush(BatchTransport& transport, Millis now,
                             const ConnectivityInfo& connectivity) {
  FlushReport report;
  if (flushing_.exchange(true)) {
    report.retained = queue_->size();
    return report;
  }
  struct Release {
    std::atomic<bool>& flag;
    ~Release() { flag = false; }
  } release{flushing_};

  {
    std::lock_guard lock(mu_);
    if (!connectivity.online || (retry_at_ && now < *retry_at_)) {
      report.retained = queue_->size();
      if (retry_at_) report.next_retry_after_ms = std::max<Millis>(0, *retry_at_ - now);
      return report;
    }
  }

  Millis t = now;
  for (;;) {
    const auto batch = queue_->peek(options_.batch_limit, options_.batch_bytes_limit);
    if (batch.empty()) break;

    UploadRequest request;
    request.event_count = batch.size();
    request.sent_at = t;
    json events = json::array();
    for (const auto& item : batch) events.push_back(json::parse(item.bytes));
    {
      std::lock_guard lock(mu_);
      request.idempotency_key = ids_.next(t).str();
    }
    json body = {{"batch_id", request.idempotency_key},
                 {"app_id", options_.app_id},
                 {"device_id", options_.device_id},
                 {"sent_ts", device_time(t)},
                 {"events", std::move(events)}};
    request.body = canonical_dump(body);

    const UploadOutcome outcome = transport.upload(request);
    ++report.requests;
    report.attempted += batch.size();
    t += std::max<Millis>(0, outcome.elapsed_ms);

    const bool answered = outcome.delivered && (outcome.http_status == 200 || outcome.http_status == 400);
    const bool complete = outcome.http_status != 200 || outcome.response.results.size() == batch.size();
    if (!answered || !complete) {
      std::lock_guard lock(mu_);
      const Millis delay = backoff_.next_delay();
      retry_at_ = t + delay;
      report.next_retry_after_ms = delay;
      break;
    }

    if (outcome.http_status == 400) {
      // The server refused the batch as a whole; resending cannot succeed.
      report.rejected += batch.size();
    } else {
      report.accepted += outcome.response.count(EventStatus::kAccepted);
      report.duplicates += outcome.response.count(EventStatus::kDuplicate);
      report.rejected += outcome.response.count(EventStatus::kRejected);
    }
    queue_->pop_front(batch.size());
    std::lock_guard lock(mu_);
    speed_.observe_transfer(request.body.size(), outcome.elapsed_ms);
    backoff_.reset();
    retry_at_.reset();
  }
  report.retained = queue_->size();
  report.elapsed_ms = t - now;
  return report;
}

}  // namespace fieldledger::sdk
