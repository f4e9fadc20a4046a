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

// Ingestion service over HTTP.
//
//   FL_DATA_DIR     store root (default ./data)
//   FL_PORT         listen port (default 8080)
//   FL_BATCH_LIMIT  max events per batch (default 100)

#include <pthread.h>
#include <signal.h>

#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "fieldledger/api/server.h"
#include "fieldledger/ingest/service.h"
#include "fieldledger/schema.h"
#include "fieldledger/tracker.h"
#include "tool_util.h"

int main(int argc, char** argv) {
  using namespace fieldledger;
  CLI::App app{"FieldLedger ingestion server"};
  std::string data_dir = tools::env_or("FL_DATA_DIR", "data");
  std::string host = "0.0.0.0";
  int port = std::stoi(tools::env_or("FL_PORT", "8080"));
  std::size_t batch_limit = std::stoul(tools::env_or("FL_BATCH_LIMIT", "100"));
  std::string console_dir = tools::env_or("FL_CONSOLE_DIR", "");
  std::string catalog_path;
  bool fsync = false;
  app.add_option("--data-dir", data_dir, "Store root (FL_DATA_DIR)");
  app.add_option("--host", host, "Listen address");
  app.add_option("--port", port, "Listen port (FL_PORT)");
  app.add_option("--batch-limit", batch_limit, "Max events per batch (FL_BATCH_LIMIT)")->check(CLI::PositiveNumber);
  app.add_option("--console-dir", console_dir, "Static files served under /console/ (FL_CONSOLE_DIR)");
  app.add_option("--catalog", catalog_path, "Schema catalog file; the built-in catalog by default");
  app.add_flag("--fsync", fsync, "fsync data and log files on commit");
  CLI11_PARSE(app, argc, argv);

  return tools::run_guarded([&] {
    const SchemaCatalog catalog = catalog_path.empty() ? SchemaCatalog::builtin() : SchemaCatalog::load(catalog_path);
    VersionedStore store(data_dir, system_now_ms, StoreOptions{fsync});
    ExperimentTracker tracker(tools::runs_dir(data_dir), store);
    ingest::IngestionService service(store, catalog, {.batch_limit = batch_limit});

    api::ApiOptions options;
    if (!console_dir.empty()) options.console_dir = console_dir;

    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    api::ApiServer server(service, &tracker, options);
    const int bound = server.start(host, port);
    std::cerr << "fieldledger-server listening on " << host << ":" << bound << " (data " << data_dir << ")\n";
    int sig = 0;
    sigwait(&signals, &sig);
    std::cerr << "shutting down\n";
    server.stop();
    return 0;
  });
}
