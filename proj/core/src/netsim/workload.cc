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

#include "fieldledger/netsim/workload.h"

namespace fieldledger::netsim {
namespace {

using nlohmann::json;

std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) { return n == 0 ? 0 : rng() % n; }

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::string content(std::mt19937_64& rng, std::size_t n) { return "c" + std::to_string(below(rng, n)); }

}  // namespace

EventKind sample_kind(const std::map<std::string, double>& mix, std::mt19937_64& rng) {
  double total = 0;
  for (const auto& [_, w] : mix) total += w;
  double x = unit(rng) * total;
  const std::string* last = nullptr;
  for (const auto& [kind, w] : mix) {
    if (w <= 0) continue;
    last = &kind;
    if (x < w) return *kind_from_label(kind);
    x -= w;
  }
  return *kind_from_label(*last);
}

json sample_payload(EventKind kind, std::mt19937_64& rng, std::size_t n_contents) {
  switch (kind) {
    case EventKind::kPageView:
      return {{"page_id", "p" + std::to_string(below(rng, 20))}, {"duration_ms", below(rng, 60'000)}};
    case EventKind::kContentView:
      return {{"content_id", content(rng, n_contents)}, {"duration_ms", below(rng, 600'000)}};
    case EventKind::kContentComplete:
      return {{"content_id", content(rng, n_contents)}, {"passed", below(rng, 2) == 1}};
    case EventKind::kPurchase: {
      json p = {{"item_id", "i" + std::to_string(below(rng, 50))},
                {"amount", static_cast<double>(99 + below(rng, 5000)) / 100.0},
                {"currency", "USD"}};
      if (below(rng, 2) == 1) p["content_id"] = content(rng, n_contents);
      return p;
    }
    case EventKind::kSearch:
      return {{"query", "q" + std::to_string(below(rng, 100))}, {"results_count", below(rng, 50)}};
    case EventKind::kSessionStart:
      return {{"entry_point", "launcher"}};
    case EventKind::kSessionEnd:
      return {{"reason", "background"}, {"foreground_ms", below(rng, 3'600'000)}};
    case EventKind::kCustom:
      return {{"name", "tap"}, {"value", static_cast<double>(below(rng, 1000))}};
  }
  return json::object();
}

}  // namespace fieldledger::netsim
