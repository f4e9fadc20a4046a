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

#include <fstream>

#include <gtest/gtest.h>

#include "fieldledger/error.h"
#include "fieldledger/netsim/scenario.h"
#include "fieldledger/netsim/simulator.h"
#include "test_support.h"

namespace fieldledger::netsim {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

json segment(double start, bool online, double loss = 0.0) {
  json s = {{"start_s", start}, {"state", online ? "online" : "offline"}};
  if (online) {
    s["bandwidth_kbps"] = 1000;
    s["rtt_ms"] = 80;
    s["request_loss_prob"] = loss;
    s["network_type"] = "cellular";
  }
  return s;
}

json scenario_doc(json segments, double duration = 600, std::size_t users = 3, std::size_t per_user = 40) {
  return {{"name", "t"},
          {"seed", 5},
          {"duration_s", duration},
          {"segments", std::move(segments)},
          {"workload",
           {{"n_users", users},
            {"events_per_user", per_user},
            {"kind_mix", {{"search", 1}, {"content_view", 1}, {"purchase", 1}}},
            {"flush_every_s", 20},
            {"active_until_s", duration * 0.75}}}};
}

class SimTest : public ::testing::Test {
 protected:
  ScenarioReport run(const Scenario& s) {
    test::TempDir dir;
    VersionedStore store(dir / "store");
    ingest::IngestionService service(store, SchemaCatalog::builtin());
    InProcessEndpoint endpoint(service);
    return run_scenario(s, endpoint);
  }
};

TEST(Scenario, ConnectivityAtUsesHalfOpenSegments) {
  const auto s = Scenario::from_json(scenario_doc({segment(0, true), segment(100, false), segment(200, true)}));
  EXPECT_TRUE(connectivity_at(s, 0).online);
  EXPECT_TRUE(connectivity_at(s, 99.999).online);
  EXPECT_FALSE(connectivity_at(s, 100).online);
  EXPECT_TRUE(connectivity_at(s, 200).online);
  EXPECT_TRUE(connectivity_at(s, 599.9).online);
  EXPECT_THROW(connectivity_at(s, 600), Error);
  EXPECT_THROW(connectivity_at(s, -1), Error);
}

TEST(Scenario, SegmentsMustTile) {
  EXPECT_THROW(Scenario::from_json(scenario_doc({segment(5, true)})), Error);
  EXPECT_THROW(Scenario::from_json(scenario_doc({segment(0, true), segment(300, false), segment(200, true)})),
               Error);
  EXPECT_THROW(Scenario::from_json(scenario_doc({segment(0, true), segment(700, false)})), Error);
  EXPECT_THROW(Scenario::from_json(scenario_doc({segment(0, true, 1.5)})), Error);
  EXPECT_THROW(Scenario::from_json(scenario_doc(json::array())), Error);
}

TEST(Scenario, RoundTrip) {
  const auto s = Scenario::from_json(scenario_doc({segment(0, true, 0.1), segment(100, false)}));
  EXPECT_EQ(Scenario::from_json(s.to_json()).to_json(), s.to_json());
}

TEST(Scenario, ShippedScenariosLoad) {
  for (const auto& entry : fs::directory_iterator(FIELDLEDGER_SCENARIO_DIR)) {
    if (entry.path().extension() != ".json") continue;
    EXPECT_NO_THROW(Scenario::load(entry.path())) << entry.path();
  }
}

TEST_F(SimTest, FullyOfflineSendsNothing) {
  const auto r = run(Scenario::from_json(scenario_doc({segment(0, false)})));
  EXPECT_EQ(r.generated, 120u);
  EXPECT_EQ(r.requests, 0u);
  EXPECT_EQ(r.delivered_unique, 0u);
  EXPECT_EQ(r.final_retained, 120u);
  EXPECT_TRUE(r.per_flush_latencies_ms.empty());
  EXPECT_GT(r.refused_offline, 0u);
  EXPECT_EQ(r.max_queue_depth, 120u);
}

TEST_F(SimTest, CleanLinkDeliversEverythingOnce) {
  const auto r = run(Scenario::from_json(scenario_doc({segment(0, true)})));
  EXPECT_EQ(r.delivered_unique, r.generated);
  EXPECT_EQ(r.duplicates_detected_serverside, 0u);
  EXPECT_EQ(r.final_retained, 0u);
  EXPECT_EQ(r.stored_duplicates, 0u);
  EXPECT_EQ(r.requests_lost + r.responses_lost, 0u);
}

TEST_F(SimTest, LossyLinkConservesEvents) {
  const auto s = Scenario::from_json(
      scenario_doc({segment(0, true, 0.4), segment(150, false), segment(300, true, 0.4), segment(500, true)}));
  const auto r = run(s);
  EXPECT_GT(r.requests_lost + r.responses_lost, 0u);
  EXPECT_EQ(r.delivered_unique + r.final_retained + r.rejected, r.generated);
  EXPECT_EQ(r.stored_duplicates, 0u);
  EXPECT_EQ(r.phantom_events, 0u);
  for (Millis l : r.per_flush_latencies_ms) EXPECT_GE(l, 0);
}

TEST_F(SimTest, SameSeedSameReport) {
  const auto s = Scenario::from_json(scenario_doc({segment(0, true, 0.3), segment(200, false), segment(400, true)}));
  const auto a = run(s);
  const auto b = run(s);
  EXPECT_EQ(a.dump(), b.dump());
  EXPECT_EQ(ScenarioReport::from_json(a.to_json()).dump(), a.dump());
  auto other = s;
  other.seed = 6;
  EXPECT_NE(run(other).dump(), a.dump());
}

TEST_F(SimTest, ScriptCountsLocalRejects) {
  const auto s = Scenario::from_json(scenario_doc({segment(0, true)}, 120));
  test::TempDir dir;
  {
    std::ofstream out(dir / "events.ndjson");
    out << R"({"t_s": 1, "user_id": "u1", "kind": "search", "payload": {"query": "q"}})" << "\n";
    out << R"({"t_s": 2, "user_id": "u1", "kind": "purchase", "payload": {"item_id": "x"}})" << "\n";
    out << R"({"t_s": 3, "user_id": "u1", "kind": "page_view", "payload": {"page_id": "p"}, "location": {"lat": 1.5, "lon": 2.5}})"
        << "\n";
  }
  const auto script = ScriptedEvent::load_ndjson(dir / "events.ndjson");
  ASSERT_EQ(script.size(), 3u);
  VersionedStore store(dir / "store");
  ingest::IngestionService service(store, SchemaCatalog::builtin());
  InProcessEndpoint endpoint(service);
  const auto r = run_script(s, script, endpoint);
  EXPECT_EQ(r.generated, 3u);
  EXPECT_EQ(r.rejected, 1u);
  EXPECT_EQ(r.delivered_unique, 2u);
}

TEST(HttpEndpointTest, UnreachableServer) {
  HttpEndpoint endpoint("http://127.0.0.1:1", std::chrono::milliseconds(500));
  try {
    endpoint.probe();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kServerUnreachable);
  }
}

}  // namespace
}  // namespace fieldledger::netsim
