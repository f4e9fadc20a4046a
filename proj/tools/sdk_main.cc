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

// Replays an event script through one SDK instance under a scenario's
// connectivity schedule.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "fieldledger/netsim/simulator.h"
#include "tool_util.h"

int main(int argc, char** argv) {
  using namespace fieldledger;
  CLI::App app{"SDK simulator"};
  std::string scenario_path, events_path, server = "http://localhost:8080", report_path, work_dir;
  app.add_option("--scenario", scenario_path, "Scenario JSON (connectivity and flush cadence)")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("--events", events_path, "NDJSON lines of {t_s, user_id, kind, payload, location?}")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("--server", server, "Base URL of the ingestion server");
  app.add_option("--report", report_path, "Write the report here (stdout otherwise)");
  app.add_option("--work-dir", work_dir, "Keep the device queue file here");
  CLI11_PARSE(app, argc, argv);

  return tools::run_guarded([&] {
    const auto scenario = netsim::Scenario::load(scenario_path);
    const auto script = netsim::ScriptedEvent::load_ndjson(events_path);
    netsim::SimOptions options;
    if (!work_dir.empty()) options.work_dir = work_dir;
    netsim::HttpEndpoint endpoint(server);
    const auto report = netsim::run_script(scenario, script, endpoint, options);
    const std::string text = report.to_json().dump(2) + "\n";
    if (report_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream(report_path, std::ios::binary) << text;
    }
    return 0;
  });
}
