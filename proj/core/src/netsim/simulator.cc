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

#include "fieldledger/netsim/simulator.h"

#include <stdlib.h>

#include <algorithm>
#include <fstream>
#include <queue>
#include <random>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include <httplib.h>

#include "fieldledger/netsim/workload.h"
#include "fieldledger/sdk/client.h"

namespace fieldledger::netsim {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

ConnectivityInfo connectivity_of(const Segment& g) {
  return g.online ? ConnectivityInfo::connected(g.network_type) : ConnectivityInfo::offline();
}

struct Counters {
  std::size_t requests = 0;
  std::size_t requests_lost = 0;
  std::size_t responses_lost = 0;
  std::size_t refused = 0;
  std::size_t server_duplicates = 0;
};

// Request-level network model in front of the endpoint.
class ShimTransport final : public sdk::BatchTransport {
 public:
  ShimTransport(const Scenario& s, IngestEndpoint& endpoint, std::mt19937_64& rng, Counters& counters)
      : s_(s), endpoint_(endpoint), rng_(rng), counters_(counters) {}

  sdk::UploadOutcome upload(const sdk::UploadRequest& request) override {
    sdk::UploadOutcome out;
    const double t_s = static_cast<double>(request.sent_at - s_.epoch_ms) / 1000.0;
    if (!(t_s >= 0 && t_s < s_.duration_s) || !connectivity_at(s_, t_s).online) {
      ++counters_.refused;
      out.error = "offline";
      return out;
    }
    const Segment& g = connectivity_at(s_, t_s);
    ++counters_.requests;
    const auto latency = static_cast<Millis>(
        g.rtt_ms + static_cast<double>(request.body.size()) * 8.0 / g.bandwidth_kbps);
    const double request_draw = unit(rng_);
    const double response_draw = unit(rng_);
    const double half = g.request_loss_prob / 2.0;

    if (request_draw < half) {
      ++counters_.requests_lost;
      out.elapsed_ms = s_.request_timeout_ms;
      out.error = "request lost";
      return out;
    }
    const api::HttpReply reply = endpoint_.post_batch(request.body, request.idempotency_key, request.sent_at + latency);
    if (reply.status == 0) {
      out.elapsed_ms = s_.request_timeout_ms;
      out.error = "server unreachable";
      return out;
    }
    BatchResponse response;
    if (reply.status == 200) {
      response = BatchResponse::from_json(json::parse(reply.body));
      counters_.server_duplicates += response.count(EventStatus::kDuplicate);
    }
    if (response_draw < half) {
      ++counters_.responses_lost;
      out.elapsed_ms = s_.request_timeout_ms;
      out.error = "response lost";
      return out;
    }
    out.delivered = true;
    out.http_status = reply.status;
    out.response = std::move(response);
    out.elapsed_ms = latency;
    return out;
  }

 private:
  const Scenario& s_;
  IngestEndpoint& endpoint_;
  std::mt19937_64& rng_;
  Counters& counters_;
};

enum class ActionKind { kLog, kFlush };

struct Action {
  Millis at;
  std::uint64_t seq;
  ActionKind kind;
  std::size_t user;

  bool operator>(const Action& o) const { return std::tie(at, seq) > std::tie(o.at, o.seq); }
};

class TempDir {
 public:
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "fieldledger-sim-XXXXXX").string();
    if (!::mkdtemp(tmpl.data())) throw Error(Errc::kStorageUnavailable, "cannot create temp dir");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

}  // namespace

api::HttpReply InProcessEndpoint::post_batch(const std::string& body, const std::string& idempotency_key,
                                             Millis sim_now) {
  return api::handle_batch_post(service_, body, idempotency_key, sim_now);
}

std::vector<json> InProcessEndpoint::stored_events() {
  Table& t = service_.store().table(ingest::kEventsTable);
  return t.read_at(t.latest_version()).rows;
}

struct HttpEndpoint::Impl {
  httplib::Client client;
  explicit Impl(const std::string& url) : client(url) {}
};

HttpEndpoint::HttpEndpoint(std::string base_url, std::chrono::milliseconds timeout)
    : impl_(std::make_unique<Impl>(base_url)) {
  impl_->client.set_connection_timeout(timeout);
  impl_->client.set_read_timeout(timeout);
  impl_->client.set_write_timeout(timeout);
}

HttpEndpoint::~HttpEndpoint() = default;

void HttpEndpoint::probe() {
  auto res = impl_->client.Get("/v1/tables");
  if (!res) throw Error(Errc::kServerUnreachable, "ingestion server unreachable: " + httplib::to_string(res.error()));
  if (res->status != 200) {
    throw Error(Errc::kServerUnreachable, "ingestion server answered " + std::to_string(res->status));
  }
}

api::HttpReply HttpEndpoint::post_batch(const std::string& body, const std::string& idempotency_key, Millis) {
  httplib::Headers headers = {{"Idempotency-Key", idempotency_key}};
  auto res = impl_->client.Post(std::string(kBatchPath), headers, body, "application/json");
  if (!res) return {0, {}};
  return {res->status, res->body};
}

std::vector<json> HttpEndpoint::stored_events() {
  std::vector<json> rows;
  std::string cursor;
  for (;;) {
    std::string path = "/v1/events?limit=1000";
    if (!cursor.empty()) path += "&cursor=" + cursor;
    auto res = impl_->client.Get(path);
    if (!res || res->status != 200) throw Error(Errc::kServerUnreachable, "event query failed");
    const json page = json::parse(res->body);
    for (const auto& e : page.at("events")) rows.push_back(e);
    if (page.at("next_cursor").is_null()) break;
    cursor = page.at("next_cursor").get<std::string>();
  }
  return rows;
}

json ScenarioReport::to_json() const {
  return {{"generated", generated},
          {"delivered_unique", delivered_unique},
          {"duplicates_detected_serverside", duplicates_detected_serverside},
          {"rejected", rejected},
          {"max_queue_depth", max_queue_depth},
          {"per_flush_latencies_ms", per_flush_latencies_ms},
          {"final_retained", final_retained},
          {"diagnostics",
           {{"stored_duplicates", stored_duplicates},
            {"phantom_events", phantom_events},
            {"requests", requests},
            {"requests_lost", requests_lost},
            {"responses_lost", responses_lost},
            {"refused_offline", refused_offline}}}};
}

ScenarioReport ScenarioReport::from_json(const json& doc) {
  ScenarioReport r;
  r.generated = doc.at("generated").get<std::size_t>();
  r.delivered_unique = doc.at("delivered_unique").get<std::size_t>();
  r.duplicates_detected_serverside = doc.at("duplicates_detected_serverside").get<std::size_t>();
  r.rejected = doc.at("rejected").get<std::size_t>();
  r.max_queue_depth = doc.at("max_queue_depth").get<std::size_t>();
  r.per_flush_latencies_ms = doc.at("per_flush_latencies_ms").get<std::vector<Millis>>();
  r.final_retained = doc.at("final_retained").get<std::size_t>();
  if (doc.contains("diagnostics")) {
    const json& d = doc["diagnostics"];
    r.stored_duplicates = d.value("stored_duplicates", std::size_t{0});
    r.phantom_events = d.value("phantom_events", std::size_t{0});
    r.requests = d.value("requests", std::size_t{0});
    r.requests_lost = d.value("requests_lost", std::size_t{0});
    r.responses_lost = d.value("responses_lost", std::size_t{0});
    r.refused_offline = d.value("refused_offline", std::size_t{0});
  }
  return r;
}

std::string ScenarioReport::dump() const { return canonical_dump(to_json()); }

namespace {

struct Planned {
  Millis at = 0;
  std::string user_id;
  EventKind kind = EventKind::kCustom;
  json payload;
  std::optional<GeoPoint> location;
};

// Shared event loop. plans[d] is device d's event schedule, sorted by time.
ScenarioReport simulate(const Scenario& s, std::vector<std::vector<Planned>> plans, std::size_t invalid_planned,
                        std::mt19937_64& master, IngestEndpoint& endpoint, const SimOptions& options) {
  endpoint.probe();

  std::optional<TempDir> temp;
  fs::path work;
  if (options.work_dir) {
    work = *options.work_dir;
    fs::create_directories(work);
  } else {
    temp.emplace();
    work = temp->path();
  }

  const auto duration_ms = static_cast<Millis>(s.duration_s * 1000.0);
  const auto flush_ms = std::max<Millis>(1, static_cast<Millis>(s.workload.flush_every_s * 1000.0));
  const std::size_t devices = plans.size();

  std::mt19937_64 network_rng(master());
  Counters counters;
  ShimTransport transport(s, endpoint, network_rng, counters);

  std::vector<std::unique_ptr<sdk::SdkClient>> clients;
  std::vector<std::size_t> cursor(devices, 0);
  std::priority_queue<Action, std::vector<Action>, std::greater<>> agenda;
  std::uint64_t seq = 0;

  for (std::size_t d = 0; d < devices; ++d) {
    sdk::SdkOptions o;
    o.app_id = s.app_id;
    o.device_id = "device-" + std::to_string(d);
    o.seed = master();
    const fs::path queue = work / ("device-" + std::to_string(d) + ".flq");
    fs::remove(queue);
    clients.push_back(std::make_unique<sdk::SdkClient>(queue, o));
    for (const auto& p : plans[d]) agenda.push({p.at, seq++, ActionKind::kLog, d});
    const Millis offset = static_cast<Millis>((d + 1) * static_cast<std::size_t>(flush_ms) / (devices + 1));
    for (Millis t = offset; t < duration_ms; t += flush_ms) agenda.push({t, seq++, ActionKind::kFlush, d});
  }

  ScenarioReport report;
  report.rejected = invalid_planned;
  report.generated = invalid_planned;
  std::unordered_set<std::string> generated;
  std::size_t depth = 0;

  while (!agenda.empty()) {
    const Action a = agenda.top();
    agenda.pop();
    const Segment& g = connectivity_at(s, static_cast<double>(a.at) / 1000.0);
    sdk::SdkClient& client = *clients[a.user];
    const std::size_t before = client.queue_length();
    const Millis now = s.epoch_ms + a.at;

    if (a.kind == ActionKind::kLog) {
      Planned& p = plans[a.user][cursor[a.user]++];
      try {
        const auto env = client.log_event(p.kind, std::move(p.payload), p.user_id, now, connectivity_of(g),
                                          p.location);
        generated.insert(env.event_id);
        ++report.generated;
      } catch (const sdk::LocalValidationFailed&) {
        ++report.generated;
        ++report.rejected;
      }
    } else {
      if (!g.online && before > 0) ++counters.refused;
      const sdk::FlushReport fr = client.flush(transport, now, connectivity_of(g));
      if (fr.requests > 0) report.per_flush_latencies_ms.push_back(fr.elapsed_ms);
      report.rejected += fr.rejected;
    }
    depth = depth + client.queue_length() - before;
    report.max_queue_depth = std::max(report.max_queue_depth, depth);
  }

  for (const auto& c : clients) report.final_retained += c->queue_length();
  report.duplicates_detected_serverside = counters.server_duplicates;
  report.requests = counters.requests;
  report.requests_lost = counters.requests_lost;
  report.responses_lost = counters.responses_lost;
  report.refused_offline = counters.refused;

  std::unordered_map<std::string, std::size_t> stored;
  for (const auto& row : endpoint.stored_events()) {
    if (row.value("app_id", std::string()) != s.app_id) continue;
    const std::string id = row.value("event_id", std::string());
    if (generated.count(id)) {
      ++stored[id];
    } else {
      ++report.phantom_events;
    }
  }
  report.delivered_unique = stored.size();
  for (const auto& [_, n] : stored) report.stored_duplicates += n - 1;
  return report;
}

}  // namespace

ScenarioReport run_scenario(const Scenario& s, IngestEndpoint& endpoint, const SimOptions& options) {
  const Workload& w = s.workload;
  const auto active_ms = static_cast<Millis>(w.active_until_s * 1000.0);
  std::mt19937_64 master(s.seed);

  std::vector<std::vector<Planned>> plans(w.n_users);
  for (std::size_t u = 0; u < w.n_users; ++u) {
    std::mt19937_64 rng(master());
    std::vector<Millis> times(w.events_per_user);
    for (auto& t : times) t = static_cast<Millis>(unit(rng) * static_cast<double>(active_ms));
    std::sort(times.begin(), times.end());
    for (Millis t : times) {
      Planned p;
      p.at = t;
      p.user_id = "u" + std::to_string(u);
      p.kind = sample_kind(w.kind_mix, rng);
      p.payload = sample_payload(p.kind, rng, w.n_contents);
      plans[u].push_back(std::move(p));
    }
  }
  return simulate(s, std::move(plans), 0, master, endpoint, options);
}

std::vector<ScriptedEvent> ScriptedEvent::load_ndjson(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kInvalidArgument, "cannot open " + path.string());
  std::vector<ScriptedEvent> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const json doc = json::parse(line, nullptr, false);
    const std::string where = path.string() + ":" + std::to_string(n);
    if (doc.is_discarded() || !doc.is_object()) throw Error(Errc::kInvalidArgument, where + ": not a JSON object");
    try {
      ScriptedEvent e;
      e.t_s = doc.at("t_s").get<double>();
      e.user_id = doc.at("user_id").get<std::string>();
      e.kind = doc.at("kind").get<std::string>();
      if (doc.contains("payload")) e.payload = doc["payload"];
      if (doc.contains("location")) {
        e.location = GeoPoint{doc["location"].at("lat").get<double>(), doc["location"].at("lon").get<double>()};
      }
      out.push_back(std::move(e));
    } catch (const json::exception& ex) {
      throw Error(Errc::kInvalidArgument, where + ": " + ex.what());
    }
  }
  return out;
}

ScenarioReport run_script(const Scenario& s, const std::vector<ScriptedEvent>& script, IngestEndpoint& endpoint,
                          const SimOptions& options) {
  std::mt19937_64 master(s.seed);
  std::vector<std::vector<Planned>> plans(1);
  std::size_t invalid = 0;
  for (const auto& e : script) {
    const auto kind = kind_from_label(e.kind);
    if (!kind || !(e.t_s >= 0) || !(e.t_s < s.duration_s)) {
      ++invalid;
      continue;
    }
    plans[0].push_back({static_cast<Millis>(e.t_s * 1000.0), e.user_id, *kind, e.payload, e.location});
  }
  std::stable_sort(plans[0].begin(), plans[0].end(), [](const Planned& a, const Planned& b) { return a.at < b.at; });
  return simulate(s, std::move(plans), invalid, master, endpoint, options);
}

}  // namespace fieldledger::netsim
