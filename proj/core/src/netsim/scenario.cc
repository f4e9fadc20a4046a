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

#include "fieldledger/netsim/scenario.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "fieldledger/error.h"

namespace fieldledger::netsim {
namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& msg) { throw Error(Errc::kInvalidArgument, "scenario: " + msg); }

double number(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_number()) invalid(std::string(key) + " must be a number");
  return doc[key].get<double>();
}

double number_or(const json& doc, const char* key, double fallback) {
  return doc.contains(key) ? number(doc, key) : fallback;
}

}  // namespace

Scenario Scenario::from_json(const json& doc) {
  if (!doc.is_object()) invalid("document must be an object");
  Scenario s;
  s.name = doc.value("name", std::string());
  if (!doc.contains("seed") || !doc["seed"].is_number_integer()) invalid("seed must be an integer");
  s.seed = doc["seed"].is_number_unsigned() ? doc["seed"].get<std::uint64_t>()
                                            : static_cast<std::uint64_t>(doc["seed"].get<std::int64_t>());
  s.duration_s = number(doc, "duration_s");
  if (!(s.duration_s > 0)) invalid("duration_s must be positive");
  s.request_timeout_ms = static_cast<Millis>(number_or(doc, "request_timeout_ms", 10'000));
  if (doc.contains("app_id")) s.app_id = doc["app_id"].get<std::string>();

  if (!doc.contains("segments") || !doc["segments"].is_array() || doc["segments"].empty()) {
    invalid("segments must be a non-empty array");
  }
  for (const auto& seg : doc["segments"]) {
    Segment g;
    g.start_s = number(seg, "start_s");
    const std::string state = seg.value("state", std::string());
    if (state != "online" && state != "offline") invalid("segment state must be online or offline");
    g.online = state == "online";
    g.bandwidth_kbps = number_or(seg, "bandwidth_kbps", 0);
    g.rtt_ms = number_or(seg, "rtt_ms", 0);
    g.request_loss_prob = number_or(seg, "request_loss_prob", 0);
    if (g.request_loss_prob < 0 || g.request_loss_prob > 1) invalid("request_loss_prob must be in [0,1]");
    if (g.online && !(g.bandwidth_kbps > 0)) invalid("online segments need a positive bandwidth_kbps");
    if (g.rtt_ms < 0) invalid("rtt_ms must be non-negative");
    if (seg.contains("network_type")) {
      const auto t = network_type_from_label(seg["network_type"].get<std::string>());
      if (!t || *t == NetworkType::kOffline) invalid("bad network_type");
      g.network_type = *t;
    }
    s.segments.push_back(g);
  }
  if (s.segments.front().start_s != 0) invalid("first segment must start at 0");
  for (std::size_t i = 1; i < s.segments.size(); ++i) {
    if (!(s.segments[i].start_s > s.segments[i - 1].start_s)) invalid("segment starts must increase");
  }
  if (!(s.segments.back().start_s < s.duration_s)) invalid("last segment starts at or after duration_s");

  if (!doc.contains("workload") || !doc["workload"].is_object()) invalid("workload must be an object");
  const json& w = doc["workload"];
  s.workload.n_users = static_cast<std::size_t>(number(w, "n_users"));
  s.workload.events_per_user = static_cast<std::size_t>(number(w, "events_per_user"));
  s.workload.flush_every_s = number(w, "flush_every_s");
  if (!(s.workload.flush_every_s > 0)) invalid("flush_every_s must be positive");
  s.workload.active_until_s = number_or(w, "active_until_s", s.duration_s);
  if (!(s.workload.active_until_s > 0) || s.workload.active_until_s > s.duration_s) {
    invalid("active_until_s must be in (0, duration_s]");
  }
  s.workload.n_contents = static_cast<std::size_t>(number_or(w, "n_contents", 40));
  if (!w.contains("kind_mix") || !w["kind_mix"].is_object() || w["kind_mix"].empty()) {
    invalid("kind_mix must be a non-empty object");
  }
  double total = 0;
  for (const auto& [kind, weight] : w["kind_mix"].items()) {
    if (!kind_from_label(kind)) invalid("unknown kind in kind_mix: " + kind);
    if (!weight.is_number() || weight.get<double>() < 0) invalid("kind weights must be non-negative numbers");
    s.workload.kind_mix[kind] = weight.get<double>();
    total += weight.get<double>();
  }
  if (!(total > 0)) invalid("kind_mix weights sum to zero");
  return s;
}

Scenario Scenario::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kInvalidArgument, "cannot open scenario " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  json doc = json::parse(ss.str(), nullptr, false);
  if (doc.is_discarded()) invalid("not valid JSON: " + path.string());
  Scenario s = from_json(doc);
  if (s.name.empty()) s.name = path.stem().string();
  return s;
}

json Scenario::to_json() const {
  json segs = json::array();
  for (const auto& g : segments) {
    json j = {{"start_s", g.start_s},
              {"state", g.online ? "online" : "offline"},
              {"bandwidth_kbps", g.bandwidth_kbps},
              {"rtt_ms", g.rtt_ms},
              {"request_loss_prob", g.request_loss_prob}};
    if (g.online) j["network_type"] = network_type_label(g.network_type);
    segs.push_back(std::move(j));
  }
  return {{"name", name},
          {"seed", seed},
          {"duration_s", duration_s},
          {"request_timeout_ms", request_timeout_ms},
          {"app_id", app_id},
          {"segments", segs},
          {"workload",
           {{"n_users", workload.n_users},
            {"events_per_user", workload.events_per_user},
            {"kind_mix", workload.kind_mix},
            {"flush_every_s", workload.flush_every_s},
            {"active_until_s", workload.active_until_s},
            {"n_contents", workload.n_contents}}}};
}

const Segment& connectivity_at(const Scenario& scenario, double t_s) {
  if (!(t_s >= 0) || !(t_s < scenario.duration_s)) {
    throw Error(Errc::kOutOfRange, "t=" + std::to_string(t_s) + " is outside [0, duration)");
  }
  const auto it = std::upper_bound(scenario.segments.begin(), scenario.segments.end(), t_s,
                                   [](double t, const Segment& g) { return t < g.start_s; });
  return *(it - 1);
}

}  // namespace fieldledger::netsim
