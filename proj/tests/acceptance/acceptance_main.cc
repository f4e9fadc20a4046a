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

// Acceptance suite for the primary components. Prints one PASS/FAIL line per
// criterion and exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fieldledger/api/server.h"
#include "fieldledger/digest.h"
#include "fieldledger/error.h"
#include "fieldledger/event.h"
#include "fieldledger/ingest/service.h"
#include "fieldledger/netsim/scenario.h"
#include "fieldledger/netsim/simulator.h"
#include "fieldledger/pipeline/runner.h"
#include "fieldledger/sdk/durable_queue.h"
#include "fieldledger/store.h"
#include "fieldledger/tracker.h"
#include "oracle.h"
#include "test_support.h"

namespace fl = fieldledger;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kLossyLinkBudgetS = 60.0;
constexpr double kRatioRelTol = 1e-9;

// Collects failed expectations for one criterion.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 8) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  bool ok() const { return failed_ == 0; }
  std::string summary() const {
    std::string out;
    for (const auto& f : failures_) out += (out.empty() ? "" : "; ") + f;
    if (failed_ > failures_.size()) out += "; +" + std::to_string(failed_ - failures_.size()) + " more";
    return out;
  }
  std::string note;

 private:
  std::vector<std::string> failures_;
  std::size_t failed_ = 0;
};

fl::netsim::Scenario lossy_link() {
  return fl::netsim::Scenario::load(fs::path(FIELDLEDGER_SCENARIO_DIR) / "lossy_link.json");
}

std::set<std::string> unique_ids(const fl::RowSet& rows, std::size_t* dupes) {
  std::set<std::string> ids;
  *dupes = 0;
  for (const auto& r : rows.rows) {
    if (!ids.insert(r.at("event_id").get<std::string>()).second) ++*dupes;
  }
  return ids;
}

fl::RowSet latest(fl::VersionedStore& store, std::string_view table) {
  fl::Table& t = store.table(table);
  return t.read_at(t.latest_version());
}

// 1. lossy_link over real HTTP against an in-process server.
void exactly_once(Checker& c) {
  fl::test::TempDir dir;
  fl::VersionedStore store(dir / "store");
  fl::ingest::IngestionService service(store, fl::SchemaCatalog::builtin());
  fl::api::ApiServer server(service, nullptr);
  const int port = server.start("127.0.0.1", 0);
  const auto scenario = lossy_link();

  const auto t0 = std::chrono::steady_clock::now();
  fl::netsim::HttpEndpoint endpoint("http://127.0.0.1:" + std::to_string(port));
  const auto report = fl::netsim::run_scenario(scenario, endpoint);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  server.stop();

  std::size_t dupes = 0;
  const auto ids = unique_ids(latest(store, fl::ingest::kEventsTable), &dupes);
  const std::size_t expected = scenario.workload.n_users * scenario.workload.events_per_user;
  c.expect(expected == 10000, "scenario does not generate 10000 events");
  c.expect(report.generated == expected, "generated " + std::to_string(report.generated));
  c.expect(ids.size() == expected, "stored unique " + std::to_string(ids.size()));
  c.expect(dupes == 0, "stored duplicates " + std::to_string(dupes));
  c.expect(report.final_retained == 0, "final_retained " + std::to_string(report.final_retained));
  c.expect(report.requests_lost + report.responses_lost > 0, "no loss was exercised");
  c.expect(secs < kLossyLinkBudgetS, "took " + std::to_string(secs) + " s");
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu unique, %zu dup, retained %zu, %zu server-side dups, %.1f s", ids.size(), dupes,
                report.final_retained, report.duplicates_detected_serverside, secs);
  c.note = buf;
}

// 2. 1000 envelopes, 200 with injected defects of three classes.
void validation_accounting(Checker& c) {
  fl::test::TempDir dir;
  fl::VersionedStore store(dir / "store");
  fl::ingest::IngestionService service(store, fl::SchemaCatalog::builtin());

  auto corpus = fl::test::random_corpus({.seed = 202, .n_events = 1000, .n_days = 5});
  std::mt19937_64 rng(77);
  std::vector<std::size_t> order(corpus.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::set<std::size_t> defective(order.begin(), order.begin() + 200);
  int k = 0;
  for (std::size_t i : defective) {
    json& e = corpus[i];
    switch (k++ % 3) {
      case 0:
        e["client_ts"] = "03/01/2022 10:00";
        break;
      case 1:
        e["kind"] = "teleport";
        break;
      default:
        e.erase("user_id");
        break;
    }
  }

  const auto responses = fl::test::ingest_all(service, corpus, 100);
  std::size_t accepted = 0, rejected = 0;
  std::set<fl::ValidationCode> seen;
  for (const auto& r : responses) {
    const std::size_t a = r.count(fl::EventStatus::kAccepted);
    const std::size_t j = r.count(fl::EventStatus::kRejected);
    c.expect(a + j == r.results.size(), "batch accounting does not add up");
    accepted += a;
    rejected += j;
    for (const auto& res : r.results) {
      for (const auto& e : res.errors) seen.insert(e.code);
    }
  }
  std::size_t quarantined = 0;
  fl::ingest::PageRequest page{.limit = 1000};
  for (;;) {
    const auto p = service.list_quarantine(page);
    quarantined += p.records.size();
    for (const auto& rec : p.records) {
      for (const auto& e : fl::ValidationOutcome::from_json(rec["outcome"]).errors) seen.insert(e.code);
    }
    if (!p.next_cursor) break;
    page.cursor = p.next_cursor;
  }
  c.expect(accepted == 800, "accepted " + std::to_string(accepted));
  c.expect(rejected == 200, "rejected " + std::to_string(rejected));
  c.expect(quarantined == 200, "quarantined " + std::to_string(quarantined));
  c.expect(latest(store, fl::ingest::kEventsTable).size() == 800, "events table size");
  c.expect(seen.count(fl::ValidationCode::kMalformedTimestamp) == 1, "MALFORMED_TIMESTAMP never reported");
  c.expect(seen.count(fl::ValidationCode::kUnknownKind) == 1, "UNKNOWN_KIND never reported");
  c.expect(seen.count(fl::ValidationCode::kMissingField) == 1, "MISSING_FIELD never reported");
  c.note = "accepted " + std::to_string(accepted) + ", quarantined " + std::to_string(quarantined);
}

// 3. Digests recorded at commit time survive 50 later commits and a reopen.
void time_travel(Checker& c) {
  fl::test::TempDir dir;
  std::vector<std::string> recorded;
  {
    fl::VersionedStore store(dir / "store");
    fl::ingest::IngestionService service(store, fl::SchemaCatalog::builtin());
    const auto corpus = fl::test::random_corpus({.seed = 303, .n_events = 50 * 20});
    fl::UlidGenerator ids(3);
    fl::Table& t = store.table(fl::ingest::kEventsTable);
    for (int b = 0; b < 50; ++b) {
      std::vector<json> batch(corpus.begin() + b * 20, corpus.begin() + (b + 1) * 20);
      const fl::Millis sent = fl::test::kMarch1 + 31LL * 86'400'000;
      service.ingest_batch(fl::test::batch_request(ids.next(sent).str(), batch, sent), sent);
      c.expect(t.latest_version() == b + 1, "commit " + std::to_string(b + 1) + " missing");
      recorded.push_back(t.read_at(t.latest_version()).digest());
    }
  }
  fl::VersionedStore reopened(dir / "store");
  fl::Table& t = reopened.table(fl::ingest::kEventsTable);
  int matched = 0;
  for (int v = 1; v <= 50; ++v) {
    const bool eq = t.read_at(v).digest() == recorded[static_cast<std::size_t>(v - 1)];
    c.expect(eq, "digest drift at v" + std::to_string(v));
    matched += eq;
  }
  const auto report = t.verify();
  c.expect(report.clean(), "verify: " + report.to_json().dump());
  c.note = std::to_string(matched) + "/50 digests stable, verify clean=" + (report.clean() ? "yes" : "no");
}

// 4a. A crash after any commit step leaves either the old or the new version.
void commit_crashes(Checker& c, int* cases) {
  const std::vector<json> pre = {{{"k", 1}}, {{"k", 2}}};
  const std::vector<json> add = {{{"k", 3}}};
  for (const auto step : fl::kAllCommitSteps) {
    fl::test::TempDir dir;
    {
      fl::VersionedStore store(dir / "store");
      fl::Table& t = store.table("t");
      t.commit(pre, 0);
      t.set_commit_hook([step](fl::CommitStep s) {
        if (s == step) throw std::runtime_error("crash");
      });
      try {
        t.commit(add, 1);
      } catch (const std::runtime_error&) {
      }
    }
    const std::string where = std::string(fl::commit_step_name(step));
    fl::VersionedStore store(dir / "store");
    fl::Table& t = store.table("t");
    const fl::Version v = t.latest_version();
    c.expect(v == 1 || v == 2, where + ": latest " + std::to_string(v));
    std::vector<json> want = pre;
    if (v == 2) want.push_back(add[0]);
    try {
      c.expect(t.read_at(v).rows == want, where + ": partial state visible");
    } catch (const std::exception& e) {
      c.expect(false, where + ": unreadable: " + e.what());
    }
    c.expect(t.verify().clean(), where + ": verify not clean");
    try {
      t.commit(std::vector<json>{{{"k", 4}}}, v);
    } catch (const std::exception& e) {
      c.expect(false, where + ": cannot commit after recovery: " + e.what());
    }
    ++*cases;
  }
}

// 4b. Queue truncated at every byte offset recovers the maximal whole-record prefix.
void queue_truncation(Checker& c, int* cases) {
  fl::test::TempDir dir;
  const auto corpus = fl::test::random_corpus({.seed = 404, .n_events = 12});
  {
    fl::sdk::DurableQueue q(dir / "full.flq");
    for (const auto& e : corpus) q.append(fl::envelope_from_json(e));
  }
  std::string full;
  {
    std::ifstream in(dir / "full.flq", std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    full = ss.str();
  }
  // Independent frame walk: 4-byte magic, then u32le length | u32 crc | bytes.
  std::vector<std::size_t> ends;
  for (std::size_t pos = 4; pos + 8 <= full.size();) {
    const auto* p = reinterpret_cast<const unsigned char*>(full.data() + pos);
    const std::size_t len = p[0] | (p[1] << 8) | (p[2] << 16) | (static_cast<std::size_t>(p[3]) << 24);
    pos += 8 + len;
    ends.push_back(pos);
  }
  c.expect(ends.size() == corpus.size() && ends.back() == full.size(), "frame walk disagrees with file");

  for (std::size_t cut = 0; cut <= full.size(); ++cut) {
    const fs::path p = dir / "cut.flq";
    {
      std::ofstream out(p, std::ios::binary | std::ios::trunc);
      out.write(full.data(), static_cast<std::streamsize>(cut));
    }
    std::size_t whole = 0;
    for (std::size_t e : ends) whole += e <= cut;
    try {
      fl::sdk::DurableQueue q(p);
      const auto snap = q.snapshot();
      bool prefix = snap.size() == whole;
      for (std::size_t i = 0; prefix && i < snap.size(); ++i) prefix = snap[i].event_id == corpus[i]["event_id"];
      c.expect(prefix, "cut " + std::to_string(cut) + ": recovered " + std::to_string(snap.size()) + " of " +
                           std::to_string(whole));
    } catch (const std::exception& e) {
      c.expect(false, "cut " + std::to_string(cut) + ": " + e.what());
    }
    ++*cases;
  }
}

void crash_atomicity(Checker& c) {
  int commit_cases = 0, cut_cases = 0;
  commit_crashes(c, &commit_cases);
  queue_truncation(c, &cut_cases);
  c.note = std::to_string(commit_cases) + " commit crash points, " + std::to_string(cut_cases) + " queue cut offsets";
}

template <typename Row>
std::vector<Row> committed(fl::VersionedStore& store, const std::string& table, fl::Version v) {
  std::vector<Row> out;
  for (const auto& r : store.table(table).read_commit(v).rows) out.push_back(Row::from_json(r));
  return out;
}

struct Outputs {
  std::vector<fl::pipeline::MetricRow> metrics;
  std::vector<fl::pipeline::KpiRow> kpis;
  std::vector<fl::pipeline::TraitRow> traits;
  std::vector<fl::pipeline::InteractionRow> interactions;
};

Outputs read_outputs(fl::VersionedStore& store, const fl::pipeline::PipelineRun& run) {
  using namespace fl::pipeline;
  Outputs o;
  for (const char* t : {kUserMetricsTable, kContentMetricsTable}) {
    if (run.outputs.count(t)) {
      auto rows = committed<MetricRow>(store, t, run.outputs.at(t));
      o.metrics.insert(o.metrics.end(), rows.begin(), rows.end());
    }
  }
  if (run.outputs.count(kKpisTable)) o.kpis = committed<KpiRow>(store, kKpisTable, run.outputs.at(kKpisTable));
  if (run.outputs.count(kTraitsTable)) o.traits = committed<TraitRow>(store, kTraitsTable, run.outputs.at(kTraitsTable));
  if (run.outputs.count(kInteractionsTable)) {
    o.interactions = committed<InteractionRow>(store, kInteractionsTable, run.outputs.at(kInteractionsTable));
  }
  return o;
}

bool is_ratio_kpi(const std::string& kpi) {
  return kpi == fl::pipeline::kpi::kAvgSessionMinutes || kpi == fl::pipeline::kpi::kOfflineFraction;
}

bool rel_close(double a, double b) {
  if (a == b) return true;
  return std::fabs(a - b) <= kRatioRelTol * std::max(std::fabs(a), std::fabs(b));
}

// Compares committed outputs to the oracle over `oracle_input`.
void compare_to_oracle(Checker& c, const Outputs& got, const std::vector<fl::test::OracleEvent>& oracle_input,
                       std::size_t* compared) {
  const auto metrics = fl::test::oracle_metrics(oracle_input);
  c.expect(got.metrics == metrics, "metric rows differ from oracle (" + std::to_string(got.metrics.size()) + " vs " +
                                       std::to_string(metrics.size()) + ")");
  const auto traits = fl::test::oracle_traits(oracle_input);
  c.expect(got.traits == traits, "trait rows differ from oracle");
  const auto interactions = fl::test::oracle_interactions(oracle_input);
  c.expect(got.interactions == interactions, "interaction rows differ from oracle");

  const auto kpis = fl::test::oracle_kpis(oracle_input);
  c.expect(got.kpis.size() == kpis.size(), "kpi row count " + std::to_string(got.kpis.size()) + " vs " +
                                               std::to_string(kpis.size()));
  for (const auto& k : got.kpis) {
    const auto it = kpis.find({k.date, k.kpi});
    if (it == kpis.end()) {
      c.expect(false, "unexpected kpi " + k.date + "/" + k.kpi);
      continue;
    }
    const bool ok = is_ratio_kpi(k.kpi) ? rel_close(k.value, it->second) : k.value == it->second;
    c.expect(ok, "kpi " + k.date + "/" + k.kpi + " = " + std::to_string(k.value) + " vs " + std::to_string(it->second));
  }

  // Second path: totals recomputed from the committed user metrics.
  std::map<std::string, double> events_by_date, purchases_by_date;
  for (const auto& m : got.metrics) {
    if (m.subject_kind != fl::pipeline::SubjectKind::kUser) continue;
    if (m.metric == fl::pipeline::metric::kEventCount) events_by_date[m.date] += m.value;
    if (m.metric == fl::pipeline::metric::kPurchases) purchases_by_date[m.date] += m.value;
  }
  for (const auto& k : got.kpis) {
    if (k.kpi == fl::pipeline::kpi::kTotalEvents) {
      c.expect(k.value == events_by_date[k.date], "two-path total_events mismatch on " + k.date);
    } else if (k.kpi == fl::pipeline::kpi::kTotalPurchases) {
      c.expect(k.value == purchases_by_date[k.date], "two-path total_purchases mismatch on " + k.date);
    }
  }
  *compared = got.metrics.size() + got.kpis.size() + got.traits.size() + got.interactions.size();
}

struct PipelineWorld {
  fl::test::TempDir dir;
  fl::VersionedStore store{dir / "store"};
  fl::ingest::IngestionService service{store, fl::SchemaCatalog::builtin()};
  fl::ExperimentTracker tracker{dir / "runs", store};

  explicit PipelineWorld(std::uint64_t seed, std::size_t n = 5000) {
    fl::test::ingest_all(service, fl::test::random_corpus({.seed = seed,
                                                           .n_events = n,
                                                           .n_days = 30,
                                                           .n_users = 50,
                                                           .n_contents = 40}),
                         100);
  }

  fl::pipeline::PipelineRun run(std::optional<fl::Version> events_version = std::nullopt) {
    fl::pipeline::PipelineOptions o;
    o.events_version = events_version;
    return fl::pipeline::run_pipeline(store, tracker, fl::SchemaCatalog::builtin(), o);
  }

  std::vector<fl::test::OracleEvent> oracle_input() {
    return fl::test::oracle_events(latest(store, fl::ingest::kEventsTable).rows,
                                   latest(store, fl::ingest::kFlagsTable).rows);
  }
};

// 5. Committed pipeline outputs against the brute-force oracle.
void oracle_equivalence(Checker& c) {
  PipelineWorld w(505);
  const auto run = w.run();
  std::size_t compared = 0;
  const auto oracle = w.oracle_input();
  c.expect(oracle.size() == 5000, "corpus size " + std::to_string(oracle.size()));
  compare_to_oracle(c, read_outputs(w.store, run), oracle, &compared);
  c.note = std::to_string(compared) + " output rows compared";
}

// 6. Pinned reruns are byte-identical; pinned inputs survive later ingests.
void reproducibility(Checker& c) {
  PipelineWorld w(606, 2000);
  const auto first = w.run();
  const auto second = w.run(first.events_version);
  for (const char* t : fl::pipeline::kOutputTables) {
    if (!first.outputs.count(t) || !second.outputs.count(t)) {
      c.expect(false, std::string("missing output ") + t);
      continue;
    }
    fl::Table& table = w.store.table(t);
    const auto a = table.commit_record(first.outputs.at(t));
    const auto b = table.commit_record(second.outputs.at(t));
    bool same = a.files.size() == b.files.size();
    for (std::size_t i = 0; same && i < a.files.size(); ++i) {
      same = a.files[i].name == b.files[i].name && a.files[i].digest == b.files[i].digest;
    }
    c.expect(same, std::string("data files differ for ") + t);
    c.expect(table.read_commit(first.outputs.at(t)).digest() == table.read_commit(second.outputs.at(t)).digest(),
             std::string("digest differs for ") + t);
  }

  fl::UlidGenerator ids(6);
  const auto extra = fl::test::random_corpus({.seed = 607, .n_events = 50 * 10});
  for (int b = 0; b < 50; ++b) {
    std::vector<json> batch(extra.begin() + b * 10, extra.begin() + (b + 1) * 10);
    const fl::Millis sent = fl::test::kMarch1 + 31LL * 86'400'000;
    w.service.ingest_batch(fl::test::batch_request(ids.next(sent).str(), batch, sent), sent);
  }
  c.expect(w.store.table(fl::ingest::kEventsTable).latest_version() == first.events_version + 50,
           "expected 50 further commits");
  std::size_t refs = 0;
  for (const auto* r : {&first, &second}) {
    for (const auto& ref : w.tracker.get(r->run_id).snapshot_refs) {
      c.expect(w.store.table(ref.table).read_at(ref.version).digest() == ref.digest,
               "snapshot ref " + ref.table + "@" + std::to_string(ref.version) + " drifted");
      ++refs;
    }
  }
  c.note = "5 output tables identical, " + std::to_string(refs) + " snapshot refs re-verified";
}

std::map<std::pair<std::string, std::string>, double> kpi_map(const Outputs& o) {
  std::map<std::pair<std::string, std::string>, double> m;
  for (const auto& k : o.kpis) m[{k.date, k.kpi}] = k.value;
  return m;
}

std::map<std::pair<std::string, std::string>, double> user_event_counts(const Outputs& o) {
  std::map<std::pair<std::string, std::string>, double> m;
  for (const auto& r : o.metrics) {
    if (r.subject_kind == fl::pipeline::SubjectKind::kUser && r.metric == fl::pipeline::metric::kEventCount) {
      m[{r.subject_id, r.date}] = r.value;
    }
  }
  return m;
}

// 7. Flagging five events invalid removes exactly their contributions.
void curation_loop(Checker& c) {
  PipelineWorld w(707);
  const auto base_run = w.run();
  const Outputs base = read_outputs(w.store, base_run);
  const auto events = latest(w.store, fl::ingest::kEventsTable);

  std::mt19937_64 rng(7);
  std::set<std::string> flagged;
  std::map<std::string, int> per_date;
  std::map<std::pair<std::string, std::string>, int> per_user_date;
  while (flagged.size() < 5) {
    const auto& row = events.rows[rng() % events.size()];
    const std::string id = row["event_id"];
    if (!flagged.insert(id).second) continue;
    const std::string date = fl::test::oracle_date(row["adjusted_ts"].get<fl::Millis>());
    ++per_date[date];
    ++per_user_date[{row["user_id"].get<std::string>(), date}];
    w.service.flag_record(id, fl::ingest::Verdict::kInvalid, "acceptance", "curator", fl::test::kMarch1);
  }

  const auto flagged_run = w.run();
  const Outputs after = read_outputs(w.store, flagged_run);
  std::size_t compared = 0;
  compare_to_oracle(c, after, w.oracle_input(), &compared);

  const auto kb = kpi_map(base), ka = kpi_map(after);
  std::set<std::string> changed_dates;
  for (const auto& [key, v] : kb) {
    const auto& [date, kpi] = key;
    const double now = ka.count(key) ? ka.at(key) : NAN;
    if (kpi == fl::pipeline::kpi::kTotalEvents) {
      const int expect_drop = per_date.count(date) ? per_date.at(date) : 0;
      c.expect(v - now == expect_drop, "total_events on " + date + " dropped by " + std::to_string(v - now));
    }
    if (v != now) changed_dates.insert(date);
  }
  for (const auto& d : changed_dates) c.expect(per_date.count(d) == 1, "unaffected date changed: " + d);

  const auto ub = user_event_counts(base), ua = user_event_counts(after);
  for (const auto& [key, v] : ub) {
    const int drop = per_user_date.count(key) ? per_user_date.at(key) : 0;
    const double now = ua.count(key) ? ua.at(key) : 0.0;
    c.expect(v - now == drop, "event_count for " + key.first + "/" + key.second);
  }

  for (const auto& id : flagged) {
    w.service.flag_record(id, fl::ingest::Verdict::kCleared, "restored", "curator", fl::test::kMarch1 + 1);
  }
  const auto restored_run = w.run();
  for (const char* t : fl::pipeline::kOutputTables) {
    fl::Table& table = w.store.table(t);
    c.expect(table.read_commit(base_run.outputs.at(t)).digest() == table.read_commit(restored_run.outputs.at(t)).digest(),
             std::string("clearing flags did not restore ") + t);
  }
  c.note = "5 flags over " + std::to_string(per_date.size()) + " dates; " + std::to_string(changed_dates.size()) +
           " dates changed; restore identical";
}

// 8. Same seed, same report, on two fresh stores.
void simulation_determinism(Checker& c) {
  const auto scenario = lossy_link();
  std::vector<std::string> dumps;
  for (int i = 0; i < 2; ++i) {
    fl::test::TempDir dir;
    fl::VersionedStore store(dir / "store");
    fl::ingest::IngestionService service(store, fl::SchemaCatalog::builtin());
    fl::netsim::InProcessEndpoint endpoint(service);
    dumps.push_back(fl::netsim::run_scenario(scenario, endpoint).dump());
  }
  c.expect(dumps[0] == dumps[1], "reports differ");
  c.note = "report " + fl::sha256_hex(dumps[0]).substr(0, 16) + " (" + std::to_string(dumps[0].size()) + " bytes)";
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int id;
    const char* name;
    std::function<void(Checker&)> fn;
  };
  const std::vector<Criterion> all = {
      {1, "exactly-once under loss", exactly_once},
      {2, "validation accounting", validation_accounting},
      {3, "time-travel stability", time_travel},
      {4, "crash atomicity", crash_atomicity},
      {5, "pipeline oracle equivalence", oracle_equivalence},
      {6, "reproducibility", reproducibility},
      {7, "curation loop", curation_loop},
      {8, "simulation determinism", simulation_determinism},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& cr : all) {
    if (!only.empty() && !only.count(cr.id)) continue;
    Checker c;
    try {
      cr.fn(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    std::printf("criterion %d %s: %s  %s%s%s\n", cr.id, cr.name, c.ok() ? "PASS" : "FAIL", c.note.c_str(),
                c.ok() ? "" : " | ", c.ok() ? "" : c.summary().c_str());
    std::fflush(stdout);
    failed += !c.ok();
  }
  return failed == 0 ? 0 : 1;
}
