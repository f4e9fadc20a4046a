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

#include "fieldledger/store.h"
#include "tool_util.h"

int main(int argc, char** argv) {
  using namespace fieldledger;
  CLI::App app{"Versioned store inspection"};
  std::string data_dir = tools::env_or("FL_DATA_DIR", "data");
  app.add_option("--data-dir", data_dir, "Store root (FL_DATA_DIR)");
  app.require_subcommand(1);

  std::string table;
  auto* history = app.add_subcommand("history", "List commits of a table");
  history->add_option("table", table)->required();

  auto* read = app.add_subcommand("read", "Print the rows of a table at a version as NDJSON");
  read->add_option("table", table)->required();
  Version version = -1;
  bool commit_only = false;
  read->add_option("--version", version, "Version (latest by default)");
  read->add_flag("--commit-only", commit_only, "Only the rows added by that version");

  auto* verify = app.add_subcommand("verify", "Check data files and log continuity");
  verify->add_option("table", table)->required();

  app.add_subcommand("tables", "List tables");
  CLI11_PARSE(app, argc, argv);

  return tools::run_guarded([&] {
    VersionedStore store(data_dir);
    if (app.got_subcommand("tables")) {
      for (const auto& name : store.tables()) {
        std::cout << name << "\t" << store.table(name).latest_version() << "\n";
      }
      return 0;
    }
    Table& t = store.table(table);
    if (app.got_subcommand(history)) {
      for (const auto& c : t.history()) std::cout << canonical_dump(c.to_json()) << "\n";
      return 0;
    }
    if (app.got_subcommand(read)) {
      const Version v = version < 0 ? t.latest_version() : version;
      const RowSet rows = commit_only ? t.read_commit(v) : t.read_at(v);
      for (const auto& row : rows.rows) std::cout << canonical_dump(row) << "\n";
      std::cerr << rows.size() << " rows at version " << v << ", digest " << rows.digest() << "\n";
      return 0;
    }
    const IntegrityReport report = t.verify();
    tools::print_json(report.to_json());
    return report.clean() ? 0 : 3;
  });
}
