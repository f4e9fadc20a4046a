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

#ifndef FIELDLEDGER_TIME_H_
#define FIELDLEDGER_TIME_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace fieldledger {

// UTC instant as milliseconds since the Unix epoch.
using Millis = std::int64_t;

// Source of "now" for anything that stamps records. Tests and the simulator
// inject their own.
using Clock = std::function<Millis()>;

Millis system_now_ms();

struct ParsedInstant {
  Millis utc_ms = 0;
  int offset_minutes = 0;
};

// Parses `YYYY-MM-DDTHH:MM:SS[.fraction](Z|+hh:mm|-hh:mm)`. The offset
// designator is mandatory. Fractions beyond milliseconds are truncated.
std::optional<ParsedInstant> parse_instant(std::string_view text);

// Converts a device timestamp to a canonical UTC instant and applies the
// batch skew correction. Throws Error(kMalformedTimestamp).
Millis normalize_timestamp(std::string_view client_ts, std::int64_t skew_ms);

// Formats with millisecond precision; a zero offset is written as `Z`.
std::string format_instant(Millis utc_ms, int offset_minutes = 0);

// Days since 1970-01-01 of the UTC calendar day containing `utc_ms`.
std::int64_t utc_day_number(Millis utc_ms);
std::string format_day(std::int64_t day_number);
std::optional<std::int64_t> parse_day(std::string_view text);

}  // namespace fieldledger

#endif  // FIELDLEDGER_TIME_H_
