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

#include "fieldledger/sdk/speed_estimator.h"

#include "fieldledger/error.h"

namespace fieldledger::sdk {

SpeedEstimator::SpeedEstimator(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw Error(Errc::kInvalidArgument, "alpha must be in (0, 1]");
  }
}

void SpeedEstimator::observe_transfer(std::uint64_t bytes, std::int64_t duration_ms) {
  if (duration_ms <= 0) return;
  // bits per millisecond == kilobits per second
  const double sample = static_cast<double>(bytes) * 8.0 / static_cast<double>(duration_ms);
  ewma_kbps_ = ewma_kbps_ ? alpha_ * sample + (1.0 - alpha_) * *ewma_kbps_ : sample;
}

}  // namespace fieldledger::sdk
