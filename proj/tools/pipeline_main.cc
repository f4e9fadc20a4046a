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

#include <iostream>

#include <CLI11.hpp>

#include "fieldledger/pipeline/runner.h"
#include "fieldledger/schema.h"
#include "fieldledger/tracker.h"
#include "tool_util.h"

int main(int argc, char** argv) {
  using namespace fieldledger;
  CLI::App app{"Behavior pipelines"};
  std::string data_dir = tools::env_or("FL_DATA_DIR", "data");
  app.add_option("--data-dir", data_dir, "Store root (FL_DATA_DIR)");
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Recompute all outputs from pinned input versions");
  run->add_option("--data-dir", data_dir, "Store root (FL_DATA_DIR)");
  Version events_version = -1, flags_version = -1;
  int gap = pipeline::kDefaultSessionGapMinutes;
  run->add_option("--events-version", events_version, "events version (latest by default)");
  run->add_option("--flags-version", flags_version, "curation_flags version (latest by default; 0 for none)");
  run->add_option("--session-gap-minutes", gap)->check(CLI::PositiveNumber);

  auto* checks = app.add_subcommand("checks", "Print the check reports of a run");
  checks->add_option("--data-dir", data_dir, "Store root (FL_DATA_DIR)");
  std::string run_id;
  checks->add_option("--run", run_id, "Run id")->required();
  CLI11_PARSE(app, argc, argv);

  return tools::run_guarded([&] {
    VersionedStore store(data_dir);
    ExperimentTracker tracker(tools::runs_dir(data_dir), store);
    if (app.got_subcommand(checks)) {
      const ExperimentRun r = tracker.get(run_id);
      tools::print_json(r.artifacts.value("check_reports", nlohmann::json::array()));
      return 0;
    }
    pipeline::PipelineOptions options;
    if (events_version >= 0) options.events_version = events_version;
    if (flags_version >= 0) options.flags_version = flags_version;
    options.session_gap_minutes = gap;
    try {
      const auto result = pipeline::run_pipeline(store, tracker, SchemaCatalog::builtin(), options);
      tools::print_json(result.to_json());
      return 0;
    } catch (const pipeline::ChecksFailed& e) {
      std::cerr << "run " << e.run_id() << " failed at stage " << e.report().stage << "\n";
      tools::print_json(e.report().to_json());
      return 4;
    }
  });
}
