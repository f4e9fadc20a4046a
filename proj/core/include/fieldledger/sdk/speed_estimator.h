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

#ifndef FIELDLEDGER_SDK_SPEED_ESTIMATOR_H_
#define FIELDLEDGER_SDK_SPEED_ESTIMATOR_H_

#include <cstdint>
#include <optional>

namespace fieldledger::sdk {

// EWMA of observed upload throughput in kilobits per second.
class SpeedEstimator {
 public:
  explicit SpeedEstimator(double alpha = 0.3);

  // Zero or negative durations are ignored.
  void observe_transfer(std::uint64_t bytes, std::int64_t duration_ms);

  std::optional<double> kbps() const { return ewma_kbps_; }
  double alpha() const { return alpha_; }

 private:
  double alpha_;
  std::optional<double> ewma_kbps_;
};

}  // namespace fieldledger::sdk

#endif  // FIELDLEDGER_SDK_SPEED_ESTIMATOR_H_
