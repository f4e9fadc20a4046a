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

#ifndef FIELDLEDGER_ERROR_H_
#define FIELDLEDGER_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace fieldledger {

// Fault categories surfaced across module boundaries. Validation problems
// with individual events are not faults; they travel as ValidationOutcome.
enum class Errc {
  kInvalidArgument,
  kMalformedTimestamp,
  kLocationOutOfRange,
  kCatalogInvalid,
  kQueueFull,
  kLocalValidationFailed,
  kStorageCorrupt,
  kBatchMalformed,
  kStorageUnavailable,
  kBadFilter,
  kNotFound,
  kVersionConflict,
  kIntegrityError,
  kUnknownVersion,
  kUnknownTable,
  kCorruptInput,
  kChecksFailed,
  kRunClosed,
  kUnknownRun,
  kOutOfRange,
  kServerUnreachable,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace fieldledger

#endif  // FIELDLEDGER_ERROR_H_
