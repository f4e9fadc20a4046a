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

#ifndef FIELDLEDGER_BATCH_H_
#define FIELDLEDGER_BATCH_H_

// Wire types of the batch upload protocol shared by the SDK and the
// ingestion service.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fieldledger/validation.h"

namespace fieldledger {

inline constexpr std::string_view kBatchPath = "/v1/events:batch";
inline constexpr std::size_t kDefaultBatchLimit = 100;
inline constexpr std::size_t kDefaultBatchBytesLimit = 512 * 1024;
// Device clock jitter tolerated between an event's client_ts and sent_ts.
inline constexpr Millis kSentTsTolerance = 60'000;

enum class EventStatus { kAccepted, kDuplicate, kRejected };

std::string_view event_status_label(EventStatus status) noexcept;
std::optional<EventStatus> event_status_from_label(std::string_view label) noexcept;

struct EventResult {
  std::string event_id;
  EventStatus status = EventStatus::kAccepted;
  std::vector<ValidationError> errors;
};

struct BatchResponse {
  std::vector<EventResult> results;

  std::size_t count(EventStatus status) const;
  nlohmann::json to_json() const;
  // Throws Error(kInvalidArgument) on malformed documents.
  static BatchResponse from_json(const nlohmann::json& doc);
};

}  // namespace fieldledger

#endif  // FIELDLEDGER_BATCH_H_
