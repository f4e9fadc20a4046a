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

#ifndef FIELDLEDGER_ULID_H_
#define FIELDLEDGER_ULID_H_

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>

#include "fieldledger/time.h"

namespace fieldledger {

// 128-bit identifier: 48-bit millisecond timestamp followed by 80 random
// bits, rendered as 26 uppercase Crockford base32 characters. The text form
// sorts lexicographically in timestamp order.
class Ulid {
 public:
  static constexpr std::size_t kTextLength = 26;

  Ulid() = default;
  Ulid(Millis timestamp_ms, const std::array<std::uint8_t, 10>& entropy);

  static std::optional<Ulid> parse(std::string_view text);

  Millis timestamp_ms() const;
  std::string str() const;

  const std::array<std::uint8_t, 16>& bytes() const { return bytes_; }

  auto operator<=>(const Ulid&) const = default;

 private:
  std::array<std::uint8_t, 16> bytes_{};
};

bool is_valid_ulid(std::string_view text);

// Mints strictly increasing ULIDs. When the clock does not advance (or runs
// backwards) the previous timestamp is kept and the entropy is incremented.
class UlidGenerator {
 public:
  explicit UlidGenerator(std::uint64_t seed);

  Ulid next(Millis now_ms);

 private:
  std::mt19937_64 rng_;
  Millis last_ms_ = -1;
  std::array<std::uint8_t, 10> last_entropy_{};
};

}  // namespace fieldledger

#endif  // FIELDLEDGER_ULID_H_
