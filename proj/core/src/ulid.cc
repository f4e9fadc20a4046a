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

#include "fieldledger/ulid.h"

namespace fieldledger {
namespace {

constexpr std::string_view kAlphabet = "0123456789ABCDEFGHJKMNPQRSTVWXYZ";

int decode_char(char c) {
  const auto pos = kAlphabet.find(c);
  return pos == std::string_view::npos ? -1 : static_cast<int>(pos);
}

}  // namespace

Ulid::Ulid(Millis timestamp_ms, const std::array<std::uint8_t, 10>& entropy) {
  auto ts = static_cast<std::uint64_t>(timestamp_ms) & 0xFFFF'FFFF'FFFFull;
  for (int i = 5; i >= 0; --i) {
    bytes_[i] = static_cast<std::uint8_t>(ts & 0xFF);
    ts >>= 8;
  }
  for (std::size_t i = 0; i < entropy.size(); ++i) bytes_[6 + i] = entropy[i];
}

std::optional<Ulid> Ulid::parse(std::string_view text) {
  if (text.size() != kTextLength) return std::nullopt;
  // 26 chars carry 130 bits; the top two must be zero.
  if (decode_char(text[0]) < 0 || decode_char(text[0]) > 7) return std::nullopt;
  Ulid out;
  unsigned __int128 value = 0;
  for (char c : text) {
    const int v = decode_char(c);
    if (v < 0) return std::nullopt;
    value = (value << 5) | static_cast<unsigned>(v);
  }
  for (int i = 15; i >= 0; --i) {
    out.bytes_[i] = static_cast<std::uint8_t>(value & 0xFF);
    value >>= 8;
  }
  return out;
}

Millis Ulid::timestamp_ms() const {
  std::uint64_t ts = 0;
  for (int i = 0; i < 6; ++i) ts = (ts << 8) | bytes_[i];
  return static_cast<Millis>(ts);
}

std::string Ulid::str() const {
  unsigned __int128 value = 0;
  for (auto b : bytes_) value = (value << 8) | b;
  std::string out(kTextLength, '0');
  for (int i = kTextLength - 1; i >= 0; --i) {
    out[i] = kAlphabet[static_cast<std::size_t>(value & 0x1F)];
    value >>= 5;
  }
  return out;
}

bool is_valid_ulid(std::string_view text) {
  return Ulid::parse(text).has_value();
}

UlidGenerator::UlidGenerator(std::uint64_t seed) : rng_(seed) {}

Ulid UlidGenerator::next(Millis now_ms) {
  if (now_ms > last_ms_) {
    last_ms_ = now_ms;
    for (auto& b : last_entropy_) b = static_cast<std::uint8_t>(rng_());
  } else {
    // Increment the 80-bit entropy as a big-endian counter.
    for (int i = static_cast<int>(last_entropy_.size()) - 1; i >= 0; --i) {
      if (++last_entropy_[i] != 0) break;
    }
  }
  return Ulid(last_ms_, last_entropy_);
}

}  // namespace fieldledger
