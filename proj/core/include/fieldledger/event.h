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

#ifndef FIELDLEDGER_EVENT_H_
#define FIELDLEDGER_EVENT_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "fieldledger/time.h"

namespace fieldledger {

enum class EventKind {
  kPageView,
  kContentView,
  kContentComplete,
  kPurchase,
  kSearch,
  kSessionStart,
  kSessionEnd,
  kCustom,
};

inline constexpr std::array<EventKind, 8> kAllEventKinds = {
    EventKind::kPageView,     EventKind::kContentView,
    EventKind::kContentComplete, EventKind::kPurchase,
    EventKind::kSearch,       EventKind::kSessionStart,
    EventKind::kSessionEnd,   EventKind::kCustom,
};

std::string_view kind_label(EventKind kind) noexcept;
std::optional<EventKind> kind_from_label(std::string_view label) noexcept;

enum class NetworkType { kWifi, kCellular, kOffline, kUnknown };

std::string_view network_type_label(NetworkType type) noexcept;
std::optional<NetworkType> network_type_from_label(std::string_view label) noexcept;

struct ConnectivityInfo {
  bool online = false;
  std::optional<double> speed_kbps;
  NetworkType network_type = NetworkType::kOffline;

  static ConnectivityInfo offline() { return {}; }
  static ConnectivityInfo connected(NetworkType type,
                                    std::optional<double> speed = std::nullopt) {
    return {true, speed, type};
  }

  bool operator==(const ConnectivityInfo&) const = default;
};

struct GeoPoint {
  double lat = 0;
  double lon = 0;

  bool operator==(const GeoPoint&) const = default;
};

// Range-checks and rounds half away from zero to 5 decimals.
// Throws Error(kLocationOutOfRange) or Error(kInvalidArgument) for non-finite input.
GeoPoint normalize_location(double lat, double lon);

// One behavioral log record. `kind` is kept as its wire label so that records
// with labels outside the catalog can still be carried to validation.
struct EventEnvelope {
  std::string event_id;
  std::string user_id;
  std::string kind;
  std::string client_ts;
  std::optional<Millis> adjusted_ts;
  std::optional<GeoPoint> location;
  ConnectivityInfo connectivity;
  std::string sdk_version;
  int schema_version = 1;
  nlohmann::json payload = nlohmann::json::object();

  bool operator==(const EventEnvelope&) const = default;
};

nlohmann::json to_json(const EventEnvelope& envelope);

// Strict structural decoding of the wire form. Throws Error(kInvalidArgument)
// when a field is missing or of the wrong JSON type; use validate_event for
// diagnostics.
EventEnvelope envelope_from_json(const nlohmann::json& doc);

// Sorted keys, no whitespace, shortest round-trip numbers, UTF-8.
std::string canonical_serialize(const EventEnvelope& envelope);
std::string canonical_dump(const nlohmann::json& doc);
EventEnvelope parse_envelope(std::string_view bytes);

}  // namespace fieldledger

#endif  // FIELDLEDGER_EVENT_H_
