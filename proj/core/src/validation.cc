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

#include "fieldledger/validation.h"

#include <cmath>
#include <regex>

#include "fieldledger/time.h"
#include "fieldledger/ulid.h"

namespace fieldledger {
namespace {

using nlohmann::json;

constexpr std::size_t kMaxIdLength = 128;

class Collector {
 public:
  void add(ValidationCode code, std::string path, std::string message) {
    outcome_.errors.push_back({code, std::move(path), std::move(message)});
  }
  ValidationOutcome take() { return std::move(outcome_); }

 private:
  ValidationOutcome outcome_;
};

bool is_bounded_id(const json& v) {
  return v.is_string() && !v.get_ref<const std::string&>().empty() &&
         v.get_ref<const std::string&>().size() <= kMaxIdLength;
}

void check_payload_field(const FieldSpec& spec, const json& value, const std::string& path,
                         Collector& out) {
  switch (spec.type) {
    case FieldType::kString:
      if (!value.is_string()) out.add(ValidationCode::kTypeMismatch, path, "expected string");
      break;
    case FieldType::kInteger:
      if (!value.is_number_integer()) out.add(ValidationCode::kTypeMismatch, path, "expected integer");
      break;
    case FieldType::kNumber:
      if (!value.is_number()) out.add(ValidationCode::kTypeMismatch, path, "expected number");
      break;
    case FieldType::kBoolean:
      if (!value.is_boolean()) out.add(ValidationCode::kTypeMismatch, path, "expected boolean");
      break;
    case FieldType::kInstant:
      if (!value.is_string()) {
        out.add(ValidationCode::kTypeMismatch, path, "expected instant string");
      } else if (!parse_instant(value.get_ref<const std::string&>())) {
        out.add(ValidationCode::kMalformedTimestamp, path, "expected ISO-8601 instant with offset");
      }
      break;
    case FieldType::kContentRef:
      if (!is_bounded_id(value)) {
        out.add(ValidationCode::kTypeMismatch, path, "expected content id (1..128 chars)");
      }
      break;
  }
}

void check_location(const json& loc, Collector& out) {
  if (!loc.is_object()) {
    out.add(ValidationCode::kTypeMismatch, "location", "expected object");
    return;
  }
  bool numeric = true;
  for (const char* axis : {"lat", "lon"}) {
    const std::string path = std::string("location.") + axis;
    if (!loc.contains(axis)) {
      out.add(ValidationCode::kMissingField, path, "required");
      numeric = false;
    } else if (!loc[axis].is_number()) {
      out.add(ValidationCode::kTypeMismatch, path, "expected number");
      numeric = false;
    }
  }
  for (const auto& [key, _] : loc.items()) {
    if (key != "lat" && key != "lon") {
      out.add(ValidationCode::kUndeclaredField, "location." + key, "not part of GeoPoint");
    }
  }
  if (numeric) {
    const double lat = loc["lat"].get<double>();
    const double lon = loc["lon"].get<double>();
    if (!std::isfinite(lat) || std::fabs(lat) > 90.0) {
      out.add(ValidationCode::kLocationOutOfRange, "location.lat", "must be within [-90, 90]");
    }
    if (!std::isfinite(lon) || std::fabs(lon) > 180.0) {
      out.add(ValidationCode::kLocationOutOfRange, "location.lon", "must be within [-180, 180]");
    }
  }
}

void check_connectivity(const json& conn, Collector& out) {
  if (!conn.is_object()) {
    out.add(ValidationCode::kTypeMismatch, "connectivity", "expected object");
    return;
  }
  std::optional<bool> online;
  std::optional<NetworkType> type;
  if (!conn.contains("online")) {
    out.add(ValidationCode::kMissingField, "connectivity.online", "required");
  } else if (!conn["online"].is_boolean()) {
    out.add(ValidationCode::kTypeMismatch, "connectivity.online", "expected boolean");
  } else {
    online = conn["online"].get<bool>();
  }
  if (!conn.contains("network_type")) {
    out.add(ValidationCode::kMissingField, "connectivity.network_type", "required");
  } else if (!conn["network_type"].is_string() ||
             !(type = network_type_from_label(conn["network_type"].get<std::string>()))) {
    out.add(ValidationCode::kTypeMismatch, "connectivity.network_type",
            "expected one of wifi, cellular, offline, unknown");
  }
  const bool has_speed = conn.contains("speed_kbps");
  if (has_speed) {
    const json& s = conn["speed_kbps"];
    if (!s.is_number() || !std::isfinite(s.get<double>()) || s.get<double>() < 0) {
      out.add(ValidationCode::kTypeMismatch, "connectivity.speed_kbps",
              "expected non-negative number");
    }
  }
  for (const auto& [key, _] : conn.items()) {
    if (key != "online" && key != "network_type" && key != "speed_kbps") {
      out.add(ValidationCode::kUndeclaredField, "connectivity." + key,
              "not part of ConnectivityInfo");
    }
  }
  if (online && !*online) {
    if (type && *type != NetworkType::kOffline) {
      out.add(ValidationCode::kTypeMismatch, "connectivity.network_type",
              "offline events must have network_type offline");
    }
    if (has_speed) {
      out.add(ValidationCode::kTypeMismatch, "connectivity.speed_kbps",
              "offline events carry no speed estimate");
    }
  }
}

}  // namespace

std::string_view validation_code_label(ValidationCode code) noexcept {
  switch (code) {
    case ValidationCode::kUnknownKind: return "UNKNOWN_KIND";
    case ValidationCode::kMissingField: return "MISSING_FIELD";
    case ValidationCode::kTypeMismatch: return "TYPE_MISMATCH";
    case ValidationCode::kUndeclaredField: return "UNDECLARED_FIELD";
    case ValidationCode::kMalformedTimestamp: return "MALFORMED_TIMESTAMP";
    case ValidationCode::kLocationOutOfRange: return "LOCATION_OUT_OF_RANGE";
    case ValidationCode::kIdMalformed: return "ID_MALFORMED";
    case ValidationCode::kSchemaVersionUnknown: return "SCHEMA_VERSION_UNKNOWN";
  }
  return "TYPE_MISMATCH";
}

std::optional<ValidationCode> validation_code_from_label(std::string_view label) noexcept {
  for (auto c : {ValidationCode::kUnknownKind, ValidationCode::kMissingField,
                 ValidationCode::kTypeMismatch, ValidationCode::kUndeclaredField,
                 ValidationCode::kMalformedTimestamp, ValidationCode::kLocationOutOfRange,
                 ValidationCode::kIdMalformed, ValidationCode::kSchemaVersionUnknown}) {
    if (validation_code_label(c) == label) return c;
  }
  return std::nullopt;
}

bool ValidationOutcome::has(ValidationCode code) const {
  for (const auto& e : errors) {
    if (e.code == code) return true;
  }
  return false;
}

json errors_to_json(const std::vector<ValidationError>& errors) {
  json list = json::array();
  for (const auto& e : errors) {
    list.push_back({{"code", validation_code_label(e.code)}, {"path", e.path}, {"message", e.message}});
  }
  return list;
}

std::vector<ValidationError> errors_from_json(const json& list) {
  std::vector<ValidationError> errors;
  for (const json& item : list) {
    const auto code = validation_code_from_label(item.at("code").get<std::string>());
    errors.push_back({code.value_or(ValidationCode::kTypeMismatch),
                      item.at("path").get<std::string>(), item.value("message", "")});
  }
  return errors;
}

json ValidationOutcome::to_json() const {
  return {{"status", accepted() ? "accepted" : "rejected"}, {"errors", errors_to_json(errors)}};
}

ValidationOutcome ValidationOutcome::from_json(const json& doc) {
  return ValidationOutcome{errors_from_json(doc.at("errors"))};
}

bool is_semver(std::string_view text) {
  static const std::regex kSemver(
      R"(^(0|[1-9]\d*)\.(0|[1-9]\d*)\.(0|[1-9]\d*)(-[0-9A-Za-z.-]+)?(\+[0-9A-Za-z.-]+)?$)");
  return std::regex_match(text.begin(), text.end(), kSemver);
}

ValidationOutcome validate_event(const json& wire, const SchemaCatalog& catalog) {
  Collector out;
  if (!wire.is_object()) {
    out.add(ValidationCode::kTypeMismatch, "", "event must be a JSON object");
    return out.take();
  }

  static constexpr std::string_view kEnvelopeFields[] = {
      "event_id", "user_id",     "kind",           "client_ts", "adjusted_ts",
      "location", "connectivity", "sdk_version", "schema_version", "payload"};
  for (const auto& [key, _] : wire.items()) {
    bool known = false;
    for (auto f : kEnvelopeFields) known = known || key == f;
    if (!known) out.add(ValidationCode::kUndeclaredField, key, "not an envelope field");
  }

  if (!wire.contains("event_id")) {
    out.add(ValidationCode::kMissingField, "event_id", "required");
  } else if (!wire["event_id"].is_string() ||
             !is_valid_ulid(wire["event_id"].get_ref<const std::string&>())) {
    out.add(ValidationCode::kIdMalformed, "event_id", "expected 26-char uppercase ULID");
  }

  if (!wire.contains("user_id")) {
    out.add(ValidationCode::kMissingField, "user_id", "required");
  } else if (!is_bounded_id(wire["user_id"])) {
    out.add(ValidationCode::kTypeMismatch, "user_id", "expected non-empty string of at most 128 chars");
  }

  const SchemaDefinition* schema = nullptr;
  if (!wire.contains("kind")) {
    out.add(ValidationCode::kMissingField, "kind", "required");
  } else if (!wire["kind"].is_string()) {
    out.add(ValidationCode::kTypeMismatch, "kind", "expected string label");
  } else if (!(schema = catalog.find(wire["kind"].get_ref<const std::string&>()))) {
    out.add(ValidationCode::kUnknownKind, "kind",
            "'" + wire["kind"].get<std::string>() + "' is not in the catalog");
  }

  if (!wire.contains("client_ts")) {
    out.add(ValidationCode::kMissingField, "client_ts", "required");
  } else if (!wire["client_ts"].is_string()) {
    out.add(ValidationCode::kTypeMismatch, "client_ts", "expected string");
  } else if (!parse_instant(wire["client_ts"].get_ref<const std::string&>())) {
    out.add(ValidationCode::kMalformedTimestamp, "client_ts",
            "expected ISO-8601 with explicit offset (Z or +hh:mm)");
  }

  if (wire.contains("adjusted_ts") && !wire["adjusted_ts"].is_number_integer()) {
    out.add(ValidationCode::kTypeMismatch, "adjusted_ts", "expected epoch milliseconds");
  }

  if (wire.contains("location") && !wire["location"].is_null()) {
    check_location(wire["location"], out);
  }

  if (!wire.contains("connectivity")) {
    out.add(ValidationCode::kMissingField, "connectivity", "required");
  } else {
    check_connectivity(wire["connectivity"], out);
  }

  if (!wire.contains("sdk_version")) {
    out.add(ValidationCode::kMissingField, "sdk_version", "required");
  } else if (!wire["sdk_version"].is_string() ||
             !is_semver(wire["sdk_version"].get_ref<const std::string&>())) {
    out.add(ValidationCode::kTypeMismatch, "sdk_version", "expected semantic version");
  }

  bool version_ok = false;
  if (!wire.contains("schema_version")) {
    out.add(ValidationCode::kMissingField, "schema_version", "required");
  } else if (!wire["schema_version"].is_number_integer() || wire["schema_version"].get<long long>() < 1) {
    out.add(ValidationCode::kTypeMismatch, "schema_version", "expected positive integer");
  } else if (schema != nullptr) {
    if (wire["schema_version"].get<long long>() != schema->version) {
      out.add(ValidationCode::kSchemaVersionUnknown, "schema_version",
              "catalog has " + schema->kind + " v" + std::to_string(schema->version));
    } else {
      version_ok = true;
    }
  }

  if (!wire.contains("payload")) {
    out.add(ValidationCode::kMissingField, "payload", "required");
  } else if (!wire["payload"].is_object()) {
    out.add(ValidationCode::kTypeMismatch, "payload", "expected object");
  } else if (schema != nullptr && version_ok) {
    const json& payload = wire["payload"];
    for (const auto& f : schema->required_fields) {
      if (!payload.contains(f.name)) {
        out.add(ValidationCode::kMissingField, "payload." + f.name, "required by " + schema->kind);
      }
    }
    for (const auto& [key, value] : payload.items()) {
      const FieldSpec* spec = schema->field(key);
      if (spec == nullptr) {
        out.add(ValidationCode::kUndeclaredField, "payload." + key, "not declared by " + schema->kind);
      } else {
        check_payload_field(*spec, value, "payload." + key, out);
      }
    }
  }
  return out.take();
}

ValidationOutcome validate_event(const EventEnvelope& envelope, const SchemaCatalog& catalog) {
  return validate_event(to_json(envelope), catalog);
}

}  // namespace fieldledger
