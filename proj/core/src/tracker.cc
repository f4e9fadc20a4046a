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

#include "fieldledger/tracker.h"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "fieldledger/error.h"
#include "fieldledger/event.h"

namespace fieldledger {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class DirLock {
 public:
  explicit DirLock(const fs::path& dir) {
    fd_ = ::open((dir / ".lock").c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ >= 0) ::flock(fd_, LOCK_EX);
  }
  ~DirLock() {
    if (fd_ >= 0) {
      ::flock(fd_, LOCK_UN);
      ::close(fd_);
    }
  }
  DirLock(const DirLock&) = delete;
  DirLock& operator=(const DirLock&) = delete;

 private:
  int fd_ = -1;
};

std::optional<RunStatus> status_from_label(std::string_view label) {
  for (auto s : {RunStatus::kRunning, RunStatus::kFinished, RunStatus::kFailed}) {
    if (run_status_label(s) == label) return s;
  }
  return std::nullopt;
}

}  // namespace

std::string_view run_status_label(RunStatus status) noexcept {
  switch (status) {
    case RunStatus::kRunning: return "running";
    case RunStatus::kFinished: return "finished";
    case RunStatus::kFailed: return "failed";
  }
  return "running";
}

std::vector<MetricPoint> ExperimentRun::metric_history(std::string_view key) const {
  std::vector<MetricPoint> out;
  for (const auto& m : metrics) {
    if (m.key == key) out.push_back(m);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.step < b.step; });
  return out;
}

json ExperimentRun::to_json() const {
  json refs = json::array();
  for (const auto& r : snapshot_refs) refs.push_back({{"table", r.table}, {"version", r.version}, {"digest", r.digest}});
  json points = json::array();
  for (const auto& m : metrics) {
    points.push_back({{"key", m.key}, {"value", m.value}, {"step", m.step}, {"logged_at", m.logged_at}});
  }
  json doc = {{"run_id", run_id},   {"name", name},          {"status", run_status_label(status)},
              {"params", params},   {"metrics", points},     {"snapshot_refs", refs},
              {"started_at", started_at}, {"artifacts", artifacts}};
  doc["ended_at"] = ended_at ? json(*ended_at) : json(nullptr);
  return doc;
}

ExperimentRun ExperimentRun::from_json(const json& doc) {
  ExperimentRun r;
  r.run_id = doc.at("run_id").get<std::string>();
  r.name = doc.at("name").get<std::string>();
  r.status = status_from_label(doc.at("status").get<std::string>()).value_or(RunStatus::kFailed);
  r.params = doc.value("params", std::map<std::string, std::string>{});
  for (const auto& m : doc.value("metrics", json::array())) {
    r.metrics.push_back({m.at("key").get<std::string>(), m.at("value").get<double>(),
                         m.at("step").get<std::int64_t>(), m.value("logged_at", Millis{0})});
  }
  for (const auto& s : doc.value("snapshot_refs", json::array())) {
    r.snapshot_refs.push_back({s.at("table").get<std::string>(), s.at("version").get<Version>(),
                               s.value("digest", "")});
  }
  r.started_at = doc.value("started_at", Millis{0});
  if (doc.contains("ended_at") && !doc["ended_at"].is_null()) r.ended_at = doc["ended_at"].get<Millis>();
  r.artifacts = doc.value("artifacts", json::object());
  return r;
}

ExperimentTracker::ExperimentTracker(fs::path runs_dir, VersionedStore& store, Clock clock,
                                     std::uint64_t seed)
    : runs_dir_(std::move(runs_dir)),
      store_(store),
      clock_(std::move(clock)),
      ids_(seed != 0 ? seed : std::random_device{}()) {
  fs::create_directories(runs_dir_);
}

fs::path ExperimentTracker::run_path(const std::string& run_id) const {
  if (!is_valid_ulid(run_id)) throw Error(Errc::kUnknownRun, run_id);
  return runs_dir_ / (run_id + ".json");
}

void ExperimentTracker::write_run(const ExperimentRun& run) const {
  const fs::path final_path = run_path(run.run_id);
  const fs::path tmp = final_path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << run.to_json().dump(2) << '\n';
    if (!out) throw Error(Errc::kStorageUnavailable, "cannot write " + tmp.string());
  }
  fs::rename(tmp, final_path);
}

ExperimentRun ExperimentTracker::get(const std::string& run_id) const {
  const fs::path p = run_path(run_id);
  std::ifstream in(p);
  if (!in) throw Error(Errc::kUnknownRun, run_id);
  std::stringstream ss;
  ss << in.rdbuf();
  return ExperimentRun::from_json(json::parse(ss.str()));
}

std::vector<ExperimentRun> ExperimentTracker::list() const {
  std::vector<ExperimentRun> out;
  for (const auto& entry : fs::directory_iterator(runs_dir_)) {
    const auto stem = entry.path().stem().string();
    if (entry.path().extension() == ".json" && is_valid_ulid(stem)) out.push_back(get(stem));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.run_id < b.run_id; });
  return out;
}

ExperimentRun ExperimentTracker::create_run(const std::string& name,
                                            const std::vector<std::pair<std::string, Version>>& snapshot_refs,
                                            std::map<std::string, std::string> params) {
  ExperimentRun run;
  run.name = name;
  run.params = std::move(params);
  for (const auto& [table_name, version] : snapshot_refs) {
    Table& table = store_.table(table_name);
    if (version < 0 || version > table.latest_version()) {
      throw Error(Errc::kUnknownVersion, table_name + "@" + std::to_string(version));
    }
    run.snapshot_refs.push_back({table_name, version, table.read_at(version).digest()});
  }
  std::lock_guard lock(mu_);
  DirLock dir_lock(runs_dir_);
  run.started_at = clock_();
  run.run_id = ids_.next(run.started_at).str();
  write_run(run);
  return run;
}

template <typename Fn>
ExperimentRun ExperimentTracker::mutate(const std::string& run_id, Fn&& fn) {
  std::lock_guard lock(mu_);
  DirLock dir_lock(runs_dir_);
  ExperimentRun run = get(run_id);
  if (run.status != RunStatus::kRunning) throw Error(Errc::kRunClosed, run_id);
  fn(run);
  write_run(run);
  return run;
}

void ExperimentTracker::log_metric(const std::string& run_id, const std::string& key, double value,
                                   std::int64_t step) {
  mutate(run_id, [&](ExperimentRun& run) { run.metrics.push_back({key, value, step, clock_()}); });
}

void ExperimentTracker::set_param(const std::string& run_id, const std::string& key, const std::string& value) {
  mutate(run_id, [&](ExperimentRun& run) { run.params[key] = value; });
}

void ExperimentTracker::attach(const std::string& run_id, const std::string& key, json value) {
  mutate(run_id, [&](ExperimentRun& run) { run.artifacts[key] = std::move(value); });
}

ExperimentRun ExperimentTracker::finalize_run(const std::string& run_id, RunStatus status) {
  if (status == RunStatus::kRunning) throw Error(Errc::kInvalidArgument, "finalize needs finished or failed");
  return mutate(run_id, [&](ExperimentRun& run) {
    run.status = status;
    run.ended_at = clock_();
  });
}

}  // namespace fieldledger
