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

#include "fieldledger/pipeline/transforms.h"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <tuple>

#include "fieldledger/error.h"
#include "fieldledger/ingest/curation.h"

namespace fieldledger::pipeline {
namespace {

using nlohmann::json;

[[noreturn]] void corrupt(const std::string& what) { throw Error(Errc::kCorruptInput, what); }

const std::string& string_field(const json& row, const char* key) {
  const auto it = row.find(key);
  if (it == row.end() || !it->is_string()) corrupt(std::string("event row lacks string ") + key);
  return it->get_ref<const std::string&>();
}

bool by_time(const BehaviorEvent& a, const BehaviorEvent& b) {
  return std::tie(a.adjusted_ts, a.event_id) < std::tie(b.adjusted_ts, b.event_id);
}

struct UserDay {
  std::vector<Millis> ts;
  std::size_t offline = 0;
  std::size_t content_views = 0;
  std::size_t content_completions = 0;
  std::size_t purchases = 0;
};

struct ContentDay {
  std::size_t views = 0;
  std::size_t completions = 0;
  std::set<std::string> viewers;
};

}  // namespace

std::vector<BehaviorEvent> prepare_events(const RowSet& events, const RowSet& flags,
                                          const SchemaCatalog& catalog) {
  const std::set<std::string> excluded = ingest::excluded_event_ids(flags);
  std::vector<BehaviorEvent> out;
  out.reserve(events.size());
  for (const json& row : events.rows) {
    BehaviorEvent e;
    e.event_id = string_field(row, "event_id");
    if (excluded.count(e.event_id)) continue;
    e.user_id = string_field(row, "user_id");
    e.kind = string_field(row, "kind");
    const auto ts = row.find("adjusted_ts");
    if (ts == row.end() || !ts->is_number_integer()) corrupt("event row lacks adjusted_ts");
    e.adjusted_ts = ts->get<Millis>();
    const auto conn = row.find("connectivity");
    if (conn == row.end() || !conn->is_object() || !conn->contains("online") ||
        !(*conn)["online"].is_boolean()) {
      corrupt("event row lacks connectivity.online");
    }
    e.online = (*conn)["online"].get<bool>();
    const SchemaDefinition* def = catalog.find(e.kind);
    if (def == nullptr) corrupt("event row has unknown kind " + e.kind);
    const auto payload = row.find("payload");
    if (payload == row.end() || !payload->is_object()) corrupt("event row lacks payload");
    for (const auto& field : def->content_ref_fields()) {
      const auto it = payload->find(field);
      if (it != payload->end() && it->is_string()) {
        e.content_id = it->get<std::string>();
        break;
      }
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<Session> sessionize(std::span<const Millis> sorted_ts, int gap_minutes) {
  const Millis gap_ms = static_cast<Millis>(gap_minutes) * 60'000;
  std::vector<Session> sessions;
  for (Millis t : sorted_ts) {
    if (sessions.empty() || t - sessions.back().end > gap_ms) {
      sessions.push_back({t, t, 1});
    } else {
      sessions.back().end = t;
      ++sessions.back().event_count;
    }
  }
  return sessions;
}

std::vector<MetricRow> compute_metrics(std::span<const BehaviorEvent> events, int gap_minutes) {
  std::vector<BehaviorEvent> sorted(events.begin(), events.end());
  std::sort(sorted.begin(), sorted.end(), by_time);

  std::map<std::pair<std::string, std::int64_t>, UserDay> users;
  std::map<std::pair<std::string, std::int64_t>, ContentDay> contents;
  for (const auto& e : sorted) {
    const std::int64_t day = utc_day_number(e.adjusted_ts);
    UserDay& u = users[{e.user_id, day}];
    u.ts.push_back(e.adjusted_ts);
    if (!e.online) ++u.offline;
    if (e.kind == "content_view") ++u.content_views;
    if (e.kind == "content_complete") ++u.content_completions;
    if (e.kind == "purchase") ++u.purchases;
    if (e.content_id && (e.kind == "content_view" || e.kind == "content_complete")) {
      ContentDay& c = contents[{*e.content_id, day}];
      if (e.kind == "content_view") {
        ++c.views;
        c.viewers.insert(e.user_id);
      } else {
        ++c.completions;
      }
    }
  }

  std::vector<MetricRow> rows;
  for (const auto& [key, u] : users) {
    const auto& [user, day] = key;
    const std::string date = format_day(day);
    const auto sessions = sessionize(u.ts, gap_minutes);
    Millis active_ms = 0;
    for (const auto& s : sessions) active_ms += s.duration_ms();
    const double count = static_cast<double>(u.ts.size());
    auto add = [&](std::string_view name, double value) {
      rows.push_back({SubjectKind::kUser, user, date, std::string(name), value});
    };
    add(metric::kEventCount, count);
    add(metric::kSessionCount, static_cast<double>(sessions.size()));
    add(metric::kActiveMinutes, static_cast<double>(active_ms) / 60'000.0);
    add(metric::kContentViews, static_cast<double>(u.content_views));
    add(metric::kContentCompletions, static_cast<double>(u.content_completions));
    add(metric::kPurchases, static_cast<double>(u.purchases));
    add(metric::kOfflineEventFraction, static_cast<double>(u.offline) / count);
  }
  for (const auto& [key, c] : contents) {
    const auto& [content, day] = key;
    const std::string date = format_day(day);
    auto add = [&](std::string_view name, double value) {
      rows.push_back({SubjectKind::kContent, content, date, std::string(name), value});
    };
    add(metric::kViews, static_cast<double>(c.views));
    add(metric::kCompletions, static_cast<double>(c.completions));
    add(metric::kUniqueViewers, static_cast<double>(c.viewers.size()));
  }
  std::sort(rows.begin(), rows.end(), [](const MetricRow& a, const MetricRow& b) {
    return std::tie(a.subject_kind, a.subject_id, a.date, a.metric) <
           std::tie(b.subject_kind, b.subject_id, b.date, b.metric);
  });
  return rows;
}

std::vector<KpiRow> aggregate_kpis(std::span<const MetricRow> metrics) {
  struct DayTotals {
    std::int64_t dau = 0;
    double events = 0;
    double purchases = 0;
    double active_minutes = 0;
    double sessions = 0;
    double offline_weighted = 0;
  };
  std::map<std::int64_t, DayTotals> days;
  for (const auto& m : metrics) {
    if (m.subject_kind != SubjectKind::kUser) continue;
    const auto day = parse_day(m.date);
    if (!day) throw Error(Errc::kCorruptInput, "metric row with bad date " + m.date);
    DayTotals& t = days[*day];
    if (m.metric == metric::kEventCount) {
      if (m.value >= 1) ++t.dau;
      t.events += m.value;
    } else if (m.metric == metric::kPurchases) {
      t.purchases += m.value;
    } else if (m.metric == metric::kActiveMinutes) {
      t.active_minutes += m.value;
    } else if (m.metric == metric::kSessionCount) {
      t.sessions += m.value;
    }
  }
  // offline_event_fraction is weighted by the same subject-day's event_count.
  std::map<std::pair<std::string, std::string>, double> counts;
  for (const auto& m : metrics) {
    if (m.subject_kind == SubjectKind::kUser && m.metric == metric::kEventCount) {
      counts[{m.subject_id, m.date}] = m.value;
    }
  }
  for (const auto& m : metrics) {
    if (m.subject_kind == SubjectKind::kUser && m.metric == metric::kOfflineEventFraction) {
      days[*parse_day(m.date)].offline_weighted += m.value * counts[{m.subject_id, m.date}];
    }
  }

  std::vector<KpiRow> rows;
  if (days.empty()) return rows;
  const std::int64_t first = days.begin()->first;
  const std::int64_t last = days.rbegin()->first;
  for (std::int64_t d = first; d <= last; ++d) {
    const auto it = days.find(d);
    const DayTotals t = it == days.end() ? DayTotals{} : it->second;
    const std::string date = format_day(d);
    // Sorted kpi names: avg_session_minutes, dau, offline_fraction, total_events, total_purchases.
    rows.push_back({date, std::string(kpi::kAvgSessionMinutes),
                    t.sessions > 0 ? t.active_minutes / t.sessions : 0.0});
    rows.push_back({date, std::string(kpi::kDau), static_cast<double>(t.dau)});
    rows.push_back({date, std::string(kpi::kOfflineFraction), t.events > 0 ? t.offline_weighted / t.events : 0.0});
    rows.push_back({date, std::string(kpi::kTotalEvents), t.events});
    rows.push_back({date, std::string(kpi::kTotalPurchases), t.purchases});
  }
  return rows;
}

std::vector<TraitRow> derive_traits(std::span<const BehaviorEvent> events, std::span<const MetricRow> metrics) {
  struct UserAgg {
    Millis first = 0;
    Millis last = 0;
    std::map<std::string, std::size_t> kinds;
    std::int64_t days_active = 0;
  };
  struct ContentAgg {
    std::size_t views = 0;
    std::set<std::string> viewers;
    std::optional<Millis> first_viewed;
  };
  std::map<std::string, UserAgg> users;
  std::map<std::string, ContentAgg> contents;
  for (const auto& e : events) {
    auto [it, inserted] = users.try_emplace(e.user_id);
    UserAgg& u = it->second;
    if (inserted) {
      u.first = u.last = e.adjusted_ts;
    } else {
      u.first = std::min(u.first, e.adjusted_ts);
      u.last = std::max(u.last, e.adjusted_ts);
    }
    ++u.kinds[e.kind];
    if (e.content_id && (e.kind == "content_view" || e.kind == "content_complete")) {
      ContentAgg& c = contents[*e.content_id];
      if (e.kind == "content_view") {
        ++c.views;
        c.viewers.insert(e.user_id);
        c.first_viewed = c.first_viewed ? std::min(*c.first_viewed, e.adjusted_ts) : e.adjusted_ts;
      }
    }
  }
  for (const auto& m : metrics) {
    if (m.subject_kind == SubjectKind::kUser && m.metric == metric::kEventCount && m.value >= 1) {
      if (auto it = users.find(m.subject_id); it != users.end()) ++it->second.days_active;
    }
  }

  std::vector<TraitRow> rows;
  for (const auto& [user, u] : users) {
    // std::map iterates labels in ascending order, so the first maximum is
    // the lexicographically smallest among ties.
    std::string favorite;
    std::size_t best = 0;
    for (const auto& [kind, n] : u.kinds) {
      if (n > best) {
        best = n;
        favorite = kind;
      }
    }
    rows.push_back({SubjectKind::kUser, user, std::string(trait::kDaysActive), u.days_active});
    rows.push_back({SubjectKind::kUser, user, std::string(trait::kFavoriteKind), favorite});
    rows.push_back({SubjectKind::kUser, user, std::string(trait::kFirstSeen), u.first});
    rows.push_back({SubjectKind::kUser, user, std::string(trait::kLastSeen), u.last});
  }
  for (const auto& [content, c] : contents) {
    if (c.first_viewed) rows.push_back({SubjectKind::kContent, content, std::string(trait::kFirstViewed), *c.first_viewed});
    rows.push_back({SubjectKind::kContent, content, std::string(trait::kTotalViews), c.views});
    rows.push_back({SubjectKind::kContent, content, std::string(trait::kUniqueViewers), c.viewers.size()});
  }
  std::sort(rows.begin(), rows.end(), [](const TraitRow& a, const TraitRow& b) {
    return std::tie(a.subject_kind, a.subject_id, a.trait) < std::tie(b.subject_kind, b.subject_id, b.trait);
  });
  return rows;
}

std::vector<InteractionRow> extract_interactions(std::span<const BehaviorEvent> events) {
  std::vector<InteractionRow> rows;
  for (const auto& e : events) {
    if (!e.content_id) continue;
    InteractionType type;
    if (e.kind == "content_view") {
      type = InteractionType::kView;
    } else if (e.kind == "content_complete") {
      type = InteractionType::kComplete;
    } else if (e.kind == "purchase") {
      type = InteractionType::kPurchase;
    } else {
      continue;
    }
    rows.push_back({e.user_id, *e.content_id, e.adjusted_ts, type, e.event_id});
  }
  std::sort(rows.begin(), rows.end(), [](const InteractionRow& a, const InteractionRow& b) {
    return std::tie(a.adjusted_ts, a.event_id) < std::tie(b.adjusted_ts, b.event_id);
  });
  return rows;
}

}  // namespace fieldledger::pipeline
