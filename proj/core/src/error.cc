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

#include "fieldledger/error.h"

namespace fieldledger {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::kInvalidArgument: return "InvalidArgument";
    case Errc::kMalformedTimestamp: return "MALFORMED_TIMESTAMP";
    case Errc::kLocationOutOfRange: return "LOCATION_OUT_OF_RANGE";
    case Errc::kCatalogInvalid: return "CatalogInvalid";
    case Errc::kQueueFull: return "QueueFull";
    case Errc::kLocalValidationFailed: return "LocalValidationFailed";
    case Errc::kStorageCorrupt: return "StorageCorrupt";
    case Errc::kBatchMalformed: return "BatchMalformed";
    case Errc::kStorageUnavailable: return "StorageUnavailable";
    case Errc::kBadFilter: return "BadFilter";
    case Errc::kNotFound: return "NotFound";
    case Errc::kVersionConflict: return "VersionConflict";
    case Errc::kIntegrityError: return "IntegrityError";
    case Errc::kUnknownVersion: return "UnknownVersion";
    case Errc::kUnknownTable: return "UnknownTable";
    case Errc::kCorruptInput: return "CorruptInput";
    case Errc::kChecksFailed: return "ChecksFailed";
    case Errc::kRunClosed: return "RunClosed";
    case Errc::kUnknownRun: return "UnknownRun";
    case Errc::kOutOfRange: return "OutOfRange";
    case Errc::kServerUnreachable: return "ServerUnreachable";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message),
      code_(code) {}

}  // namespace fieldledger
