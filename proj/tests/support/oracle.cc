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

#include "oracle.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <set>

namespace fieldledger::test {

using nlohmann::json;
using pipeline::InteractionRow;
using pipeline::InteractionType;
using pipeline::MetricRow;
using pipeline::SubjectKind;
using pipeline::TraitRow;

std::vector<OracleEvent> oracle_events(const std::vector<json>& event_rows, const std::vector<json>& flag_rows) {
  std::map<std::pair<std::string, std::string>, std::string> latest;  // (event, actor) -> verdict
  for (const auto& f : flag_rows) {
    latest[{f.at("event_id").get<std::string>(), f.at("actor").get<std::string>()}] =
        f.at("verdict").get<std::string>();
  }
  std::set<std::string> excluded;
  for (const auto& [key, verdict] : latest) {
    if (verdict == "invalid") excluded.insert(key.first);
  }

  std::vector<OracleEvent> out;
  for (const auto& r : event_rows) {
    OracleEvent e;
    e.event_id = r.at("event_id").get<std::string>();
    if (excluded.count(e.event_id)) continue;
    e.user_id = r.at("user_id").get<std::string>();
    e.kind = r.at("kind").get<std::string>();
    e.ts = r.at("adjusted_ts").get<std::int64_t>();
    e.online = r.at("connectivity").at("online").get<bool>();
    const json& p = r.at("payload");
    if ((e.kind == "content_view" || e.kind == "content_complete" || e.kind == "purchase") &&
        p.contains("content_id")) {
      e.content_id = p["content_id"].get<std::string>();
    }
    out.push_back(e);
  }
  return out;
}

std::string oracle_date(std::int64_t utc_ms) {
  using namespace std::chrono;
  const auto days = floor<std::chrono::days>(sys_time<milliseconds>(milliseconds(utc_ms)));
  const year_month_day ymd(days);
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()));
  return buf;
}

std::pair<int, std::int64_t> oracle_sessions(std::vector<std::int64_t> ts, int gap_minutes) {
  std::sort(ts.begin(), ts.end());
  int count = 0;
  std::int64_t total = 0;
  std::int64_t start = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (i == 0 || ts[i] - ts[i - 1] > static_cast<std::int64_t>(gap_minutes) * 60'000) {
      if (i > 0) total += ts[i - 1] - start;
      start = ts[i];
      ++count;
    }
  }
  if (!ts.empty()) total += ts.back() - start;
  return {count, total};
}

std::vector<MetricRow> oracle_metrics(const std::vector<OracleEvent>& events, int gap_minutes) {
  std::set<std::pair<std::string, std::string>> user_days;
  std::set<std::pair<std::string, std::string>> content_days;
  for (const auto& e : events) {
    user_days.insert({e.user_id, oracle_date(e.ts)});
    if (!e.content_id.empty() && (e.kind == "content_view" || e.kind == "content_complete")) {
      content_days.insert({e.content_id, oracle_date(e.ts)});
    }
  }

  std::vector<MetricRow> rows;
  for (const auto& [user, date] : user_days) {
    int n = 0, offline = 0, views = 0, completions = 0, purchases = 0;
    std::vector<std::int64_t> ts;
    for (const auto& e : events) {
      if (e.user_id != user || oracle_date(e.ts) != date) continue;
      ++n;
      ts.push_back(e.ts);
      offline += e.online ? 0 : 1;
      views += e.kind == "content_view";
      completions += e.kind == "content_complete";
      purchases += e.kind == "purchase";
    }
    const auto [sessions, active_ms] = oracle_sessions(ts, gap_minutes);
    auto add = [&](const char* m, double v) { rows.push_back({SubjectKind::kUser, user, date, m, v}); };
    add("event_count", n);
    add("session_count", sessions);
    add("active_minutes", static_cast<double>(active_ms) / 60000.0);
    add("content_views", views);
    add("content_completions", completions);
    add("purchases", purchases);
    add("offline_event_fraction", static_cast<double>(offline) / static_cast<double>(n));
  }
  for (const auto& [content, date] : content_days) {
    int views = 0, completions = 0;
    std::set<std::string> viewers;
    for (const auto& e : events) {
      if (e.content_id != content || oracle_date(e.ts) != date) continue;
      if (e.kind == "content_view") {
        ++views;
        viewers.insert(e.user_id);
      } else if (e.kind == "content_complete") {
        ++completions;
      }
    }
    auto add = [&](const char* m, double v) { rows.push_back({SubjectKind::kContent, content, date, m, v}); };
    add("views", views);
    add("completions", completions);
    add("unique_viewers", static_cast<double>(viewers.size()));
  }
  std::sort(rows.begin(), rows.end(), [](const MetricRow& a, const MetricRow& b) {
    return std::tie(a.subject_kind, a.subject_id, a.date, a.metric) <
           std::tie(b.subject_kind, b.subject_id, b.date, b.metric);
  });
  return rows;
}

std::map<std::pair<std::string, std::string>, double> oracle_kpis(const std::vector<OracleEvent>& events,
                                                                  int gap_minutes) {
  std::map<std::pair<std::string, std::string>, double> out;
  if (events.empty()) return out;
  std::int64_t lo = events.front().ts, hi = lo;
  for (const auto& e : events) {
    lo = std::min(lo, e.ts);
    hi = std::max(hi, e.ts);
  }
  // Walk every calendar day between the extremes.
  const std::int64_t day_ms = 86'400'000;
  const std::int64_t first = (lo >= 0 ? lo : lo - day_ms + 1) / day_ms;
  const std::int64_t last = (hi >= 0 ? hi : hi - day_ms + 1) / day_ms;
  for (std::int64_t d = first; d <= last; ++d) {
    const std::string date = oracle_date(d * day_ms);
    std::set<std::string> users;
    int total = 0, purchases = 0, offline = 0;
    std::map<std::string, std::vector<std::int64_t>> per_user;
    for (const auto& e : events) {
      if (oracle_date(e.ts) != date) continue;
      users.insert(e.user_id);
      ++total;
      purchases += e.kind == "purchase";
      offline += e.online ? 0 : 1;
      per_user[e.user_id].push_back(e.ts);
    }
    int sessions = 0;
    std::int64_t active_ms = 0;
    for (const auto& [_, ts] : per_user) {
      const auto [n, ms] = oracle_sessions(ts, gap_minutes);
      sessions += n;
      active_ms += ms;
    }
    out[{date, "dau"}] = static_cast<double>(users.size());
    out[{date, "total_events"}] = total;
    out[{date, "total_purchases"}] = purchases;
    out[{date, "avg_session_minutes"}] =
        sessions > 0 ? static_cast<double>(active_ms) / 60000.0 / sessions : 0.0;
    out[{date, "offline_fraction"}] = total > 0 ? static_cast<double>(offline) / total : 0.0;
  }
  return out;
}

std::vector<TraitRow> oracle_traits(const std::vector<OracleEvent>& events) {
  std::set<std::string> users, contents;
  for (const auto& e : events) {
    users.insert(e.user_id);
    if (!e.content_id.empty() && (e.kind == "content_view" || e.kind == "content_complete")) {
      contents.insert(e.content_id);
    }
  }
  std::vector<TraitRow> rows;
  for (const auto& u : users) {
    std::int64_t first = INT64_MAX, last = INT64_MIN;
    std::set<std::string> dates;
    std::map<std::string, int> kinds;
    for (const auto& e : events) {
      if (e.user_id != u) continue;
      first = std::min(first, e.ts);
      last = std::max(last, e.ts);
      dates.insert(oracle_date(e.ts));
      ++kinds[e.kind];
    }
    std::string favorite;
    int best = -1;
    for (const auto& [k, n] : kinds) {
      if (n > best || (n == best && k < favorite)) {
        best = n;
        favorite = k;
      }
    }
    rows.push_back({SubjectKind::kUser, u, "days_active", static_cast<std::int64_t>(dates.size())});
    rows.push_back({SubjectKind::kUser, u, "favorite_kind", favorite});
    rows.push_back({SubjectKind::kUser, u, "first_seen", first});
    rows.push_back({SubjectKind::kUser, u, "last_seen", last});
  }
  for (const auto& c : contents) {
    int views = 0;
    std::set<std::string> viewers;
    std::int64_t first = INT64_MAX;
    for (const auto& e : events) {
      if (e.content_id != c || e.kind != "content_view") continue;
      ++views;
      viewers.insert(e.user_id);
      first = std::min(first, e.ts);
    }
    if (views > 0) rows.push_back({SubjectKind::kContent, c, "first_viewed", first});
    rows.push_back({SubjectKind::kContent, c, "total_views", views});
    rows.push_back({SubjectKind::kContent, c, "unique_viewers", static_cast<std::int64_t>(viewers.size())});
  }
  std::sort(rows.begin(), rows.end(), [](const TraitRow& a, const TraitRow& b) {
    return std::tie(a.subject_kind, a.subject_id, a.trait) < std::tie(b.subject_kind, b.subject_id, b.trait);
  });
  return rows;
}

std::vector<InteractionRow> oracle_interactions(const std::vector<OracleEvent>& events) {
  std::vector<InteractionRow> rows;
  for (const auto& e : events) {
    if (e.content_id.empty()) continue;
    const InteractionType t = e.kind == "content_view"       ? InteractionType::kView
                              : e.kind == "content_complete" ? InteractionType::kComplete
                                                             : InteractionType::kPurchase;
    rows.push_back({e.user_id, e.content_id, e.ts, t, e.event_id});
  }
  std::sort(rows.begin(), rows.end(), [](const InteractionRow& a, const InteractionRow& b) {
    return std::tie(a.adjusted_ts, a.event_id) < std::tie(b.adjusted_ts, b.event_id);
  });
  return rows;
}

}  // namespace fieldledger::test
