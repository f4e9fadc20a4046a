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

#ifndef FIELDLEDGER_NETSIM_SCENARIO_H_
#define FIELDLEDGER_NETSIM_SCENARIO_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "fieldledger/event.h"
#include "fieldledger/time.h"

namespace fieldledger::netsim {

struct Segment {
  double start_s = 0;
  bool online = false;
  double bandwidth_kbps = 0;
  double rtt_ms = 0;
  double request_loss_prob = 0;
  NetworkType network_type = NetworkType::kWifi;  // ignored when offline
};

struct Workload {
  std::size_t n_users = 1;
  std::size_t events_per_user = 1;
  std::map<std::string, double> kind_mix;  // kind label -> weight
  double flush_every_s = 30;
  double active_until_s = 0;  // events are logged in [0, active_until_s); 0 means duration
  std::size_t n_contents = 40;
};

struct Scenario {
  std::string name;
  std::uint64_t seed = 0;
  double duration_s = 0;
  std::vector<Segment> segments;
  Workload workload;
  Millis request_timeout_ms = 10'000;
  Millis epoch_ms = 1'646'092'800'000;  // simulated t=0, 2022-03-01T00:00:00Z
  std::string app_id = "netsim";

  // Throws Error(kInvalidArgument) if the document is malformed or the
  // segments do not tile [0, duration_s).
  static Scenario from_json(const nlohmann::json& doc);
  static Scenario load(const std::filesystem::path& path);
  nlohmann::json to_json() const;
};

// Throws Error(kOutOfRange) unless 0 <= t_s < duration_s.
const Segment& connectivity_at(const Scenario& scenario, double t_s);

}  // namespace fieldledger::netsim

#endif  // FIELDLEDGER_NETSIM_SCENARIO_H_
