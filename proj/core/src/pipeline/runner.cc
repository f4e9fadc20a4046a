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

#include "fieldledger/pipeline/runner.h"

#include "fieldledger/ingest/service.h"

namespace fieldledger::pipeline {
namespace {

using nlohmann::json;

Version resolve(Table& table, const std::optional<Version>& requested) {
  const Version latest = table.latest_version();
  if (!requested) return latest;
  if (*requested < 0 || *requested > latest) {
    throw Error(Errc::kUnknownVersion,
                table.name() + ": version " + std::to_string(*requested) + " does not exist");
  }
  return *requested;
}

}  // namespace

json PipelineRun::to_json() const {
  json reps = json::array();
  for (const auto& r : reports) reps.push_back(r.to_json());
  return {{"run_id", run_id},
          {"events_version", events_version},
          {"flags_version", flags_version},
          {"outputs", outputs},
          {"started_at", started_at},
          {"finished_at", finished_at},
          {"reports", reps}};
}

ChecksFailed::ChecksFailed(std::string run_id, CheckReport report)
    : Error(Errc::kChecksFailed, "stage " + report.stage + " failed its checks"),
      run_id_(std::move(run_id)),
      report_(std::move(report)) {}

ComputedPipeline compute_pipeline(const RowSet& events, const RowSet& flags, const SchemaCatalog& catalog,
                                  Millis run_start, int session_gap_minutes, const StageHook& hook) {
  ComputedPipeline out;
  out.events = prepare_events(events, flags, catalog);
  auto& o = out.outputs;

  for (Stage stage : kAllStages) {
    switch (stage) {
      case Stage::kMetrics: o.metrics = compute_metrics(out.events, session_gap_minutes); break;
      case Stage::kKpis: o.kpis = aggregate_kpis(o.metrics); break;
      case Stage::kTraits: o.traits = derive_traits(out.events, o.metrics); break;
      case Stage::kInteractions: o.interactions = extract_interactions(out.events); break;
    }
    if (hook) hook(stage, o);
    out.reports.push_back(run_checks(stage, out.events, o, run_start));
    if (out.reports.back().verdict() == CheckVerdict::kFail) {
      out.failed_stage = stage;
      break;
    }
  }
  return out;
}

std::map<std::string, std::vector<json>> output_rows(const StageOutputs& outputs) {
  std::map<std::string, std::vector<json>> rows;
  for (const char* t : kOutputTables) rows[t];
  for (const auto& m : outputs.metrics) {
    rows[m.subject_kind == SubjectKind::kUser ? kUserMetricsTable : kContentMetricsTable].push_back(m.to_json());
  }
  for (const auto& k : outputs.kpis) rows[kKpisTable].push_back(k.to_json());
  for (const auto& t : outputs.traits) rows[kTraitsTable].push_back(t.to_json());
  for (const auto& i : outputs.interactions) rows[kInteractionsTable].push_back(i.to_json());
  return rows;
}

PipelineRun run_pipeline(VersionedStore& store, ExperimentTracker& tracker, const SchemaCatalog& catalog,
                         const PipelineOptions& options) {
  Table& events_table = store.table(ingest::kEventsTable);
  Table& flags_table = store.table(ingest::kFlagsTable);

  PipelineRun run;
  run.events_version = resolve(events_table, options.events_version);
  run.flags_version = resolve(flags_table, options.flags_version);

  // Output versions are captured before any work so that a concurrent run
  // that commits first makes this one lose the race.
  std::map<std::string, Version> expected;
  for (const char* t : kOutputTables) expected[t] = store.table(t).latest_version();

  std::vector<std::pair<std::string, Version>> refs = {{std::string(ingest::kEventsTable), run.events_version}};
  if (run.flags_version > 0) refs.emplace_back(std::string(ingest::kFlagsTable), run.flags_version);
  const ExperimentRun created =
      tracker.create_run(options.run_name, refs,
                         {{"events_version", std::to_string(run.events_version)},
                          {"flags_version", std::to_string(run.flags_version)},
                          {"session_gap_minutes", std::to_string(options.session_gap_minutes)}});
  run.run_id = created.run_id;
  run.started_at = created.started_at;

  auto fail = [&](const std::string& stage, const json& reports) {
    tracker.set_param(run.run_id, "failed_stage", stage);
    tracker.attach(run.run_id, "check_reports", reports);
    tracker.finalize_run(run.run_id, RunStatus::kFailed);
  };

  ComputedPipeline computed;
  try {
    const RowSet events = events_table.read_at(run.events_version);
    const RowSet flags = run.flags_version > 0 ? flags_table.read_at(run.flags_version) : RowSet{};
    computed = compute_pipeline(events, flags, catalog, run.started_at, options.session_gap_minutes,
                                options.stage_hook);
  } catch (const Error&) {
    fail("prepare", json::array());
    throw;
  }
  run.reports = computed.reports;

  json reports = json::array();
  std::size_t warnings = 0;
  for (const auto& r : computed.reports) {
    reports.push_back(r.to_json());
    for (const auto& f : r.findings) warnings += f.severity == Severity::kWarn ? f.count : 0;
  }
  if (computed.failed_stage) {
    fail(std::string(stage_name(*computed.failed_stage)), reports);
    throw ChecksFailed(run.run_id, computed.reports.back());
  }

  const json op_meta = {{"op", "pipeline"},
                        {"run_id", run.run_id},
                        {"events_version", run.events_version},
                        {"flags_version", run.flags_version}};
  const auto rows = output_rows(computed.outputs);
  try {
    for (const char* t : kOutputTables) {
      const auto& table_rows = rows.at(t);
      if (table_rows.empty()) continue;
      run.outputs[t] = store.table(t).commit(table_rows, expected.at(t), op_meta);
    }
  } catch (const Error&) {
    fail("commit", reports);
    throw;
  }

  tracker.attach(run.run_id, "check_reports", reports);
  tracker.attach(run.run_id, "outputs", run.outputs);
  tracker.log_metric(run.run_id, "input_events", static_cast<double>(computed.events.size()), 0);
  tracker.log_metric(run.run_id, "check_warnings", static_cast<double>(warnings), 0);
  const ExperimentRun done = tracker.finalize_run(run.run_id, RunStatus::kFinished);
  run.finished_at = done.ended_at.value_or(run.started_at);
  return run;
}

}  // namespace fieldledger::pipeline
