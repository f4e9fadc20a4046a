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

#include "fieldledger/sdk/backoff.h"

#include <algorithm>
#include <cmath>

namespace fieldledger::sdk {

Backoff::Backoff(BackoffPolicy policy, std::uint64_t seed) : policy_(policy), rng_(seed) {}

Millis Backoff::next_delay() {
  const double nominal = static_cast<double>(policy_.base_ms) *
                         std::pow(policy_.multiplier, std::min(failures_, 62));
  ++failures_;
  std::uniform_real_distribution<double> spread(1.0 - policy_.jitter, 1.0 + policy_.jitter);
  const double jittered = nominal * spread(rng_);
  return std::min(policy_.cap_ms, static_cast<Millis>(std::llround(std::min(jittered, 1e15))));
}

}  // namespace fieldledger::sdk
