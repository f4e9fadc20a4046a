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

#ifndef FIELDLEDGER_SDK_BACKOFF_H_
#define FIELDLEDGER_SDK_BACKOFF_H_

#include <cstdint>
#include <random>

#include "fieldledger/time.h"

namespace fieldledger::sdk {

struct BackoffPolicy {
  Millis base_ms = 1000;
  double multiplier = 2.0;
  Millis cap_ms = 5 * 60 * 1000;
  double jitter = 0.2;  // delays are drawn from nominal * [1 - jitter, 1 + jitter]
};

// Exponential backoff over consecutive transport failures. The jittered delay
// is clamped to the cap, so successive delays never decrease.
class Backoff {
 public:
  Backoff(BackoffPolicy policy, std::uint64_t seed);

  Millis next_delay();
  void reset() { failures_ = 0; }
  int consecutive_failures() const { return failures_; }
  const BackoffPolicy& policy() const { return policy_; }

 private:
  BackoffPolicy policy_;
  std::mt19937_64 rng_;
  int failures_ = 0;
};

}  // namespace fieldledger::sdk

#endif  // FIELDLEDGER_SDK_BACKOFF_H_
