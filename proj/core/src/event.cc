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

#include "fieldledger/event.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

#include "fieldledger/error.h"

namespace fieldledger {
namespace {

using nlohmann::json;

const json& require(const json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end()) {
    throw Error(Errc::kInvalidArgument, std::string("missing field ") + key);
  }
  return *it;
}

std::string require_string(const json& doc, const char* key) {
  const json& v = require(doc, key);
  if (!v.is_string()) {
    throw Error(Errc::kInvalidArgument, std::string(key) + " is not a string");
  }
  return v.get<std::string>();
}

double require_number(const json& doc, const char* key) {
  const json& v = require(doc, key);
  if (!v.is_number()) {
    throw Error(Errc::kInvalidArgument, std::string(key) + " is not a number");
  }
  return v.get<double>();
}

double round5(double v) { return std::round(v * 1e5) / 1e5; }

}  // namespace

std::string_view kind_label(EventKind kind) noexcept {
  switch (kind) {
    case EventKind::kPageView: return "page_view";
    case EventKind::kContentView: return "content_view";
    case EventKind::kContentComplete: return "content_complete";
    case EventKind::kPurchase: return "purchase";
    case EventKind::kSearch: return "search";
    case EventKind::kSessionStart: return "session_start";
    case EventKind::kSessionEnd: return "session_end";
    case EventKind::kCustom: return "custom";
  }
  return "custom";
}

std::optional<EventKind> kind_from_label(std::string_view label) noexcept {
  for (EventKind k : kAllEventKinds) {
    if (kind_label(k) == label) return k;
  }
  return std::nullopt;
}

std::string_view network_type_label(NetworkType type) noexcept {
  switch (type) {
    case NetworkType::kWifi: return "wifi";
    case NetworkType::kCellular: return "cellular";
    case NetworkType::kOffline: return "offline";
    case NetworkType::kUnknown: return "unknown";
  }
  return "unknown";
}

std::optional<NetworkType> network_type_from_label(std::string_view label) noexcept {
  for (NetworkType t : {NetworkType::kWifi, NetworkType::kCellular,
                        NetworkType::kOffline, NetworkType::kUnknown}) {
    if (network_type_label(t) == label) return t;
  }
  return std::nullopt;
}

GeoPoint normalize_location(double lat, double lon) {
  if (!std::isfinite(lat) || !std::isfinite(lon)) {
    throw Error(Errc::kInvalidArgument, "coordinates must be finite");
  }
  if (std::fabs(lat) > 90.0 || std::fabs(lon) > 180.0) {
    throw Error(Errc::kLocationOutOfRange, "lat/lon outside [-90,90]x[-180,180]");
  }
  // std::round already rounds halves away from zero.
  return GeoPoint{round5(lat), round5(lon)};
}

json to_json(const EventEnvelope& e) {
  json doc = json::object();
  doc["event_id"] = e.event_id;
  doc["user_id"] = e.user_id;
  doc["kind"] = e.kind;
  doc["client_ts"] = e.client_ts;
  if (e.adjusted_ts) doc["adjusted_ts"] = *e.adjusted_ts;
  if (e.location) doc["location"] = {{"lat", e.location->lat}, {"lon", e.location->lon}};
  json conn = {{"online", e.connectivity.online},
               {"network_type", network_type_label(e.connectivity.network_type)}};
  if (e.connectivity.speed_kbps) conn["speed_kbps"] = *e.connectivity.speed_kbps;
  doc["connectivity"] = std::move(conn);
  doc["sdk_version"] = e.sdk_version;
  doc["schema_version"] = e.schema_version;
  doc["payload"] = e.payload;
  return doc;
}

EventEnvelope envelope_from_json(const json& doc) {
  if (!doc.is_object()) {
    throw Error(Errc::kInvalidArgument, "envelope is not a JSON object");
  }
  EventEnvelope e;
  e.event_id = require_string(doc, "event_id");
  e.user_id = require_string(doc, "user_id");
  e.kind = require_string(doc, "kind");
  e.client_ts = require_string(doc, "client_ts");
  if (const auto it = doc.find("adjusted_ts"); it != doc.end()) {
    if (!it->is_number_integer()) {
      throw Error(Errc::kInvalidArgument, "adjusted_ts is not an integer");
    }
    e.adjusted_ts = it->get<Millis>();
  }
  if (const auto it = doc.find("location"); it != doc.end()) {
    if (!it->is_object()) throw Error(Errc::kInvalidArgument, "location is not an object");
    e.location = GeoPoint{require_number(*it, "lat"), require_number(*it, "lon")};
  }
  const json& conn = require(doc, "connectivity");
  if (!conn.is_object()) throw Error(Errc::kInvalidArgument, "connectivity is not an object");
  const json& online = require(conn, "online");
  if (!online.is_boolean()) throw Error(Errc::kInvalidArgument, "online is not a boolean");
  e.connectivity.online = online.get<bool>();
  const auto type = network_type_from_label(require_string(conn, "network_type"));
  if (!type) throw Error(Errc::kInvalidArgument, "unknown network_type");
  e.connectivity.network_type = *type;
  if (conn.contains("speed_kbps")) e.connectivity.speed_kbps = require_number(conn, "speed_kbps");
  e.sdk_version = require_string(doc, "sdk_version");
  const json& sv = require(doc, "schema_version");
  if (!sv.is_number_integer()) throw Error(Errc::kInvalidArgument, "schema_version is not an integer");
  e.schema_version = sv.get<int>();
  const json& payload = require(doc, "payload");
  if (!payload.is_object()) throw Error(Errc::kInvalidArgument, "payload is not an object");
  e.payload = payload;
  return e;
}

namespace {

// Shortest round-trip digits (std::to_chars), laid out like Python's repr:
// fixed notation for decimal exponents in [-4, 16), scientific otherwise.
void append_double(std::string& out, double v) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific);
  std::string_view sci(buf, static_cast<std::size_t>(res.ptr - buf));
  if (sci.front() == '-') {
    out += '-';
    sci.remove_prefix(1);
  }
  const std::size_t e_pos = sci.find('e');
  std::string digits;
  for (char c : sci.substr(0, e_pos)) {
    if (c != '.') digits += c;
  }
  const int exp = std::stoi(std::string(sci.substr(e_pos + 1)));
  const int n = static_cast<int>(digits.size());
  if (exp >= -4 && exp < 16) {
    if (exp >= 0) {
      if (n <= exp + 1) {
        out += digits;
        out.append(static_cast<std::size_t>(exp + 1 - n), '0');
        out += ".0";
      } else {
        out.append(digits, 0, static_cast<std::size_t>(exp + 1));
        out += '.';
        out.append(digits, static_cast<std::size_t>(exp + 1));
      }
    } else {
      out += "0.";
      out.append(static_cast<std::size_t>(-exp - 1), '0');
      out += digits;
    }
    return;
  }
  out += digits[0];
  if (n > 1) {
    out += '.';
    out.append(digits, 1);
  }
  char ebuf[16];
  std::snprintf(ebuf, sizeof ebuf, "e%c%02d", exp < 0 ? '-' : '+', exp < 0 ? -exp : exp);
  out += ebuf;
}

void append_canonical(std::string& out, const json& doc) {
  switch (doc.type()) {
    case json::value_t::object: {
      // object_t is an ordered std::map, so keys come out sorted.
      out += '{';
      bool first = true;
      for (const auto& [key, value] : doc.items()) {
        if (!first) out += ',';
        first = false;
        out += json(key).dump(-1, ' ', false, json::error_handler_t::strict);
        out += ':';
        append_canonical(out, value);
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < doc.size(); ++i) {
        if (i) out += ',';
        append_canonical(out, doc[i]);
      }
      out += ']';
      break;
    }
    case json::value_t::number_float:
      append_double(out, doc.get<double>());
      break;
    default:
      out += doc.dump(-1, ' ', false, json::error_handler_t::strict);
  }
}

}  // namespace

std::string canonical_dump(const json& doc) {
  std::string out;
  append_canonical(out, doc);
  return out;
}

std::string canonical_serialize(const EventEnvelope& envelope) {
  return canonical_dump(to_json(envelope));
}

EventEnvelope parse_envelope(std::string_view bytes) {
  json doc = json::parse(bytes, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    throw Error(Errc::kInvalidArgument, "envelope bytes are not valid JSON");
  }
  return envelope_from_json(doc);
}

}  // namespace fieldledger
