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

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "fieldledger/ingest/service.h"
#include "fieldledger/netsim/simulator.h"
#include "fieldledger/schema.h"
#include "tool_util.h"

int main(int argc, char** argv) {
  using namespace fieldledger;
  CLI::App app{"Connectivity simulator"};
  app.require_subcommand(1);
  auto* run = app.add_subcommand("run", "Run a scenario against an ingestion server");
  std::string scenario_path, server, data_dir, report_path, work_dir;
  run->add_option("--scenario", scenario_path, "Scenario JSON")->required()->check(CLI::ExistingFile);
  auto* server_opt = run->add_option("--server", server, "Base URL of a running server");
  auto* data_opt = run->add_option("--data-dir", data_dir, "Ingest in-process into this store instead");
  server_opt->excludes(data_opt);
  run->add_option("--report", report_path, "Write the report here (stdout otherwise)");
  run->add_option("--work-dir", work_dir, "Keep device queue files here");
  CLI11_PARSE(app, argc, argv);

  return tools::run_guarded([&] {
    const auto scenario = netsim::Scenario::load(scenario_path);
    netsim::SimOptions options;
    if (!work_dir.empty()) options.work_dir = work_dir;

    netsim::ScenarioReport report;
    if (!data_dir.empty()) {
      VersionedStore store(data_dir);
      ingest::IngestionService service(store, SchemaCatalog::builtin());
      netsim::InProcessEndpoint endpoint(service);
      report = netsim::run_scenario(scenario, endpoint, options);
    } else {
      netsim::HttpEndpoint endpoint(server.empty() ? "http://localhost:8080" : server);
      report = netsim::run_scenario(scenario, endpoint, options);
    }

    const std::string text = report.to_json().dump(2) + "\n";
    if (report_path.empty()) {
      std::cout << text;
    } else {
      const auto parent = std::filesystem::path(report_path).parent_path();
      if (!parent.empty()) std::filesystem::create_directories(parent);
      std::ofstream(report_path, std::ios::binary) << text;
      std::cerr << "generated " << report.generated << ", delivered_unique " << report.delivered_unique
                << ", final_retained " << report.final_retained << "\n";
    }
    return 0;
  });
}
