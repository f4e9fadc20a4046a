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

#include "fieldledger/tracker.h"
#include "tool_util.h"

int main(int argc, char** argv) {
  using namespace fieldledger;
  CLI::App app{"Experiment runs"};
  std::string data_dir = tools::env_or("FL_DATA_DIR", "data");
  app.add_option("--data-dir", data_dir, "Store root (FL_DATA_DIR)");
  app.require_subcommand(1);
  auto* list = app.add_subcommand("list", "One line per run");
  list->add_option("--data-dir", data_dir, "Store root (FL_DATA_DIR)");
  auto* show = app.add_subcommand("show", "Full run document");
  show->add_option("--data-dir", data_dir, "Store root (FL_DATA_DIR)");
  std::string run_id;
  show->add_option("run_id", run_id)->required();
  CLI11_PARSE(app, argc, argv);

  return tools::run_guarded([&] {
    VersionedStore store(data_dir);
    ExperimentTracker tracker(tools::runs_dir(data_dir), store);
    if (app.got_subcommand(show)) {
      tools::print_json(tracker.get(run_id).to_json());
      return 0;
    }
    for (const auto& r : tracker.list()) {
      std::cout << r.run_id << "\t" << run_status_label(r.status) << "\t" << r.name << "\t"
                << format_instant(r.started_at, 0);
      for (const auto& ref : r.snapshot_refs) std::cout << "\t" << ref.table << "@" << ref.version;
      std::cout << "\n";
    }
    return 0;
  });
}
