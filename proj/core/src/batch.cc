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

#include "fieldledger/batch.h"

#include "fieldledger/error.h"

namespace fieldledger {

std::string_view event_status_label(EventStatus status) noexcept {
  switch (status) {
    case EventStatus::kAccepted: return "accepted";
    case EventStatus::kDuplicate: return "duplicate";
    case EventStatus::kRejected: return "rejected";
  }
  return "rejected";
}

std::optional<EventStatus> event_status_from_label(std::string_view label) noexcept {
  for (auto s : {EventStatus::kAccepted, EventStatus::kDuplicate, EventStatus::kRejected}) {
    if (event_status_label(s) == label) return s;
  }
  return std::nullopt;
}

std::size_t BatchResponse::count(EventStatus status) const {
  std::size_t n = 0;
  for (const auto& r : results) n += r.status == status;
  return n;
}

nlohmann::json BatchResponse::to_json() const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& r : results) {
    list.push_back({{"event_id", r.event_id},
                    {"status", event_status_label(r.status)},
                    {"errors", errors_to_json(r.errors)}});
  }
  return {{"results", list}};
}

BatchResponse BatchResponse::from_json(const nlohmann::json& doc) {
  try {
    BatchResponse out;
    for (const auto& item : doc.at("results")) {
      const auto status = event_status_from_label(item.at("status").get<std::string>());
      if (!status) throw Error(Errc::kInvalidArgument, "unknown event status");
      out.results.push_back({item.at("event_id").get<std::string>(), *status,
                             errors_from_json(item.value("errors", nlohmann::json::array()))});
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kInvalidArgument, std::string("malformed batch response: ") + e.what());
  }
}

}  // namespace fieldledger
