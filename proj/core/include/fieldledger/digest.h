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

#ifndef FIELDLEDGER_DIGEST_H_
#define FIELDLEDGER_DIGEST_H_

#include <cstdint>
#include <string>
#include <string_view>

namespace fieldledger {

// Lowercase hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

// Incremental SHA-256 for large row sets.
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(std::string_view data);
  std::string hex_digest();

 private:
  void* ctx_;
};

// CRC-32C (Castagnoli), as used by the queue record framing.
std::uint32_t crc32c(std::string_view data);

}  // namespace fieldledger

#endif  // FIELDLEDGER_DIGEST_H_
