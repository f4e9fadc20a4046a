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

#ifndef FIELDLEDGER_VALIDATION_H_
#define FIELDLEDGER_VALIDATION_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fieldledger/event.h"
#include "fieldledger/schema.h"

namespace fieldledger {

enum class ValidationCode {
  kUnknownKind,
  kMissingField,
  kTypeMismatch,
  kUndeclaredField,
  kMalformedTimestamp,
  kLocationOutOfRange,
  kIdMalformed,
  kSchemaVersionUnknown,
};

std::string_view validation_code_label(ValidationCode code) noexcept;
std::optional<ValidationCode> validation_code_from_label(std::string_view label) noexcept;

struct ValidationError {
  ValidationCode code;
  std::string path;
  std::string message;

  bool operator==(const ValidationError&) const = default;
};

struct ValidationOutcome {
  std::vector<ValidationError> errors;

  bool accepted() const { return errors.empty(); }
  bool has(ValidationCode code) const;

  nlohmann::json to_json() const;
  static ValidationOutcome from_json(const nlohmann::json& doc);

  bool operator==(const ValidationOutcome&) const = default;
};

nlohmann::json errors_to_json(const std::vector<ValidationError>& errors);
std::vector<ValidationError> errors_from_json(const nlohmann::json& list);

// Checks a wire-form envelope against every envelope invariant and the
// payload schema of its kind. Reports all violations. Pure.
ValidationOutcome validate_event(const nlohmann::json& wire, const SchemaCatalog& catalog);
ValidationOutcome validate_event(const EventEnvelope& envelope, const SchemaCatalog& catalog);

bool is_semver(std::string_view text);

}  // namespace fieldledger

#endif  // FIELDLEDGER_VALIDATION_H_
