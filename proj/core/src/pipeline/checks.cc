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

#include "fieldledger/pipeline/checks.h"

#include <map>
#include <set>
#include <tuple>
#include <unordered_set>

namespace fieldledger::pipeline {
namespace {

using nlohmann::json;

class RuleAccumulator {
 public:
  RuleAccumulator(std::string rule_id, Severity severity) : finding_{std::move(rule_id), severity, 0, {}} {}

  void offend(std::string sample) {
    ++finding_.count;
    if (finding_.samples.size() < kMaxSampleOffenders) finding_.samples.push_back(std::move(sample));
  }

  void emit(CheckReport& report) {
    if (finding_.count > 0) report.findings.push_back(std::move(finding_));
  }

 private:
  Finding finding_;
};

std::string metric_key(const MetricRow& m) {
  return std::string(subject_kind_label(m.subject_kind)) + "/" + m.subject_id + "/" + m.date + "/" + m.metric;
}

}  // namespace

std::string_view stage_name(Stage stage) noexcept {
  switch (stage) {
    case Stage::kMetrics: return "metrics";
    case Stage::kKpis: return "kpis";
    case Stage::kTraits: return "traits";
    case Stage::kInteractions: return "interactions";
  }
  return "metrics";
}

std::string_view severity_label(Severity s) noexcept { return s == Severity::kWarn ? "warn" : "error"; }

std::string_view verdict_label(CheckVerdict v) noexcept {
  switch (v) {
    case CheckVerdict::kPass: return "pass";
    case CheckVerdict::kPassWithWarnings: return "pass_with_warnings";
    case CheckVerdict::kFail: return "fail";
  }
  return "fail";
}

CheckVerdict CheckReport::verdict() const {
  bool warned = false;
  for (const auto& f : findings) {
    if (f.severity == Severity::kError) return CheckVerdict::kFail;
    warned = true;
  }
  return warned ? CheckVerdict::kPassWithWarnings : CheckVerdict::kPass;
}

const Finding* CheckReport::find(std::string_view rule_id) const {
  for (const auto& f : findings) {
    if (f.rule_id == rule_id) return &f;
  }
  return nullptr;
}

json CheckReport::to_json() const {
  json list = json::array();
  for (const auto& f : findings) {
    list.push_back({{"rule_id", f.rule_id},
                    {"severity", severity_label(f.severity)},
                    {"count", f.count},
                    {"samples", f.samples}});
  }
  return {{"stage", stage}, {"findings", list}, {"verdict", verdict_label(verdict())}};
}

CheckReport CheckReport::from_json(const json& doc) {
  CheckReport r;
  r.stage = doc.at("stage").get<std::string>();
  for (const auto& f : doc.at("findings")) {
    r.findings.push_back({f.at("rule_id").get<std::string>(),
                          f.at("severity").get<std::string>() == "warn" ? Severity::kWarn : Severity::kError,
                          f.at("count").get<std::size_t>(), f.at("samples").get<std::vector<std::string>>()});
  }
  return r;
}

CheckReport run_checks(Stage stage, std::span<const BehaviorEvent> inputs, const StageOutputs& outputs,
                       Millis run_start) {
  CheckReport report;
  report.stage = std::string(stage_name(stage));

  switch (stage) {
    case Stage::kMetrics: {
      RuleAccumulator r1("R1", Severity::kError);
      RuleAccumulator r2("R2", Severity::kWarn);
      RuleAccumulator r3("R3", Severity::kError);
      const Millis upper = run_start + 24 * 3'600'000;
      for (const auto& e : inputs) {
        if (e.adjusted_ts < kEarliestPlausibleTs || e.adjusted_ts > upper) r2.offend(e.event_id);
      }
      std::set<std::string> keys;
      for (const auto& m : outputs.metrics) {
        if (m.subject_id.empty()) r1.offend(metric_key(m));
        if (!keys.insert(metric_key(m)).second) r3.offend(metric_key(m));
      }
      r1.emit(report);
      r2.emit(report);
      r3.emit(report);
      break;
    }
    case Stage::kKpis: {
      RuleAccumulator r3("R3", Severity::kError);
      RuleAccumulator r4("R4", Severity::kError);
      std::set<std::pair<std::string, std::string>> keys;
      std::map<std::string, double> kpi_totals;
      for (const auto& k : outputs.kpis) {
        if (!keys.insert({k.date, k.kpi}).second) r3.offend(k.date + "/" + k.kpi);
        if (k.kpi == kpi::kTotalEvents) kpi_totals[k.date] += k.value;
      }
      std::map<std::string, double> metric_totals;
      for (const auto& m : outputs.metrics) {
        if (m.subject_kind == SubjectKind::kUser && m.metric == metric::kEventCount) {
          metric_totals[m.date] += m.value;
        }
      }
      std::set<std::string> dates;
      for (const auto& [d, _] : kpi_totals) dates.insert(d);
      for (const auto& [d, _] : metric_totals) dates.insert(d);
      for (const auto& d : dates) {
        const auto k = kpi_totals.find(d);
        const auto m = metric_totals.find(d);
        const double kv = k == kpi_totals.end() ? 0.0 : k->second;
        const double mv = m == metric_totals.end() ? 0.0 : m->second;
        // A date with events but no KPI row is also a reconciliation failure.
        if (kv != mv || (k == kpi_totals.end() && mv > 0)) r4.offend(d);
      }
      r3.emit(report);
      r4.emit(report);
      break;
    }
    case Stage::kTraits: {
      RuleAccumulator r1("R1", Severity::kError);
      RuleAccumulator r3("R3", Severity::kError);
      std::set<std::tuple<SubjectKind, std::string, std::string>> keys;
      for (const auto& t : outputs.traits) {
        const std::string label = std::string(subject_kind_label(t.subject_kind)) + "/" + t.subject_id + "/" + t.trait;
        if (t.subject_id.empty()) r1.offend(label);
        if (!keys.insert({t.subject_kind, t.subject_id, t.trait}).second) r3.offend(label);
      }
      r1.emit(report);
      r3.emit(report);
      break;
    }
    case Stage::kInteractions: {
      RuleAccumulator r1("R1", Severity::kError);
      RuleAccumulator r5("R5", Severity::kError);
      RuleAccumulator r6("R6", Severity::kError);
      std::unordered_set<std::string> ids;
      ids.reserve(inputs.size());
      for (const auto& e : inputs) ids.insert(e.event_id);
      for (const auto& i : outputs.interactions) {
        if (i.user_id.empty() || i.content_id.empty()) r1.offend(i.event_id);
        if (!ids.count(i.event_id)) r5.offend(i.event_id);
      }
      if (outputs.interactions.size() > inputs.size()) {
        r6.offend(std::to_string(outputs.interactions.size()) + " > " + std::to_string(inputs.size()));
      }
      r1.emit(report);
      r5.emit(report);
      r6.emit(report);
      break;
    }
  }
  return report;
}

}  // namespace fieldledger::pipeline
