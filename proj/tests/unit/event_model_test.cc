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

#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "fieldledger/digest.h"
#include "fieldledger/error.h"
#include "fieldledger/event.h"
#include "fieldledger/schema.h"
#include "fieldledger/time.h"
#include "fieldledger/ulid.h"
#include "fieldledger/validation.h"
#include "test_support.h"

namespace fieldledger {
namespace {

using nlohmann::json;

TEST(NormalizeTimestamp, ConvertsOffsetToUtc) {
  EXPECT_EQ(normalize_timestamp("2022-03-01T12:00:00+02:00", 0), 1646128800000);
}

TEST(NormalizeTimestamp, AddsSkew) {
  EXPECT_EQ(normalize_timestamp("2022-03-01T10:00:00Z", 5000), 1646128805000);
}

TEST(NormalizeTimestamp, RejectsMissingOffset) {
  try {
    normalize_timestamp("2022-03-01T10:00:00", 0);
    FAIL() << "expected MalformedTimestamp";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kMalformedTimestamp);
  }
}

TEST(NormalizeTimestamp, RejectsGarbage) {
  for (const char* bad : {"", "yesterday", "2022-13-01T00:00:00Z", "2022-02-30T00:00:00Z",
                          "2022-03-01T24:00:00Z", "2022-03-01 10:00:00Z", "2022-03-01T10:00:00+2:00"}) {
    EXPECT_FALSE(parse_instant(bad).has_value()) << bad;
  }
}

TEST(NormalizeTimestamp, SkewIsAdditive) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 2000; ++i) {
    const Millis t = test::kMarch1 + static_cast<Millis>(rng() % 1'000'000'000'000ULL) - 500'000'000'000;
    const int offset = static_cast<int>(rng() % 1681) - 840;
    const std::string ts = format_instant(t, offset);
    const auto a = static_cast<std::int64_t>(rng() % 2'000'000) - 1'000'000;
    const auto b = static_cast<std::int64_t>(rng() % 2'000'000) - 1'000'000;
    ASSERT_EQ(normalize_timestamp(ts, 0), t) << ts;
    ASSERT_EQ(normalize_timestamp(ts, a + b), normalize_timestamp(ts, a) + b) << ts;
  }
}

TEST(FormatInstant, RoundTripsWithOffset) {
  EXPECT_EQ(format_instant(1646128800000, 120), "2022-03-01T12:00:00.000+02:00");
  EXPECT_EQ(format_instant(1646128800123, 0), "2022-03-01T10:00:00.123Z");
  EXPECT_EQ(format_instant(1646128800000, -330), "2022-03-01T04:30:00.000-05:30");
}

TEST(NormalizeLocation, Examples) {
  EXPECT_EQ(normalize_location(41.39, 2.17), (GeoPoint{41.39, 2.17}));
  EXPECT_EQ(normalize_location(0.123456, -0.123456), (GeoPoint{0.12346, -0.12346}));
  try {
    normalize_location(91.0, 0.0);
    FAIL() << "expected LocationOutOfRange";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kLocationOutOfRange);
  }
  EXPECT_THROW(normalize_location(0.0, -180.5), Error);
  EXPECT_THROW(normalize_location(std::nan(""), 0.0), Error);
  EXPECT_NO_THROW(normalize_location(-90.0, 180.0));
}

TEST(NormalizeLocation, IsIdempotent) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lat(-90, 90), lon(-180, 180);
  for (int i = 0; i < 10000; ++i) {
    const GeoPoint p = normalize_location(lat(rng), lon(rng));
    ASSERT_EQ(normalize_location(p.lat, p.lon), p);
  }
}

TEST(Ulid, ParsesAndOrders) {
  UlidGenerator gen(5);
  std::string prev;
  for (int i = 0; i < 5000; ++i) {
    const Ulid id = gen.next(test::kMarch1 + i / 10);  // repeated milliseconds
    const std::string s = id.str();
    ASSERT_EQ(s.size(), 26u);
    ASSERT_TRUE(is_valid_ulid(s));
    ASSERT_EQ(Ulid::parse(s)->str(), s);
    ASSERT_LT(prev, s);
    prev = s;
  }
  EXPECT_EQ(Ulid::parse(prev)->timestamp_ms(), test::kMarch1 + 499);
}

TEST(Ulid, RejectsMalformed) {
  EXPECT_FALSE(is_valid_ulid(""));
  EXPECT_FALSE(is_valid_ulid("01FX1E2K9XFP3JDVHETJQ4G0P"));    // 25 chars
  EXPECT_FALSE(is_valid_ulid("01FX1E2K9XFP3JDVHETJQ4G0PU"));   // U is not Crockford
  EXPECT_FALSE(is_valid_ulid("81FX1E2K9XFP3JDVHETJQ4G0P8"));   // overflows 128 bits
  EXPECT_FALSE(is_valid_ulid("01fx1e2k9xfp3jdvhetjq4g0p8"));   // lowercase
  EXPECT_TRUE(is_valid_ulid("01FX1E2K9XFP3JDVHETJQ4G0P8"));
}

TEST(Digest, KnownVectors) {
  EXPECT_EQ(crc32c("123456789"), 0xE3069283u);
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  Sha256 h;
  h.update("a");
  h.update("bc");
  EXPECT_EQ(h.hex_digest(), sha256_hex("abc"));
}

TEST(SchemaCatalog, BuiltinCoversEveryKind) {
  const auto& catalog = SchemaCatalog::builtin();
  for (EventKind k : kAllEventKinds) EXPECT_NE(catalog.find(kind_label(k)), nullptr) << kind_label(k);
  EXPECT_EQ(catalog.find("vid_play"), nullptr);
  EXPECT_EQ(catalog.find("content_view")->content_ref_fields(), std::vector<std::string>{"content_id"});
}

TEST(SchemaCatalog, MetaValidationRejectsBrokenCatalogs) {
  const json good = json::parse(builtin_catalog_text());
  EXPECT_NO_THROW(SchemaCatalog::from_json(good));

  auto expect_invalid = [](const json& doc) {
    try {
      SchemaCatalog::from_json(doc);
      ADD_FAILURE() << doc.dump();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::kCatalogInvalid);
    }
  };
  json missing_kind = good;
  missing_kind["schemas"].erase(missing_kind["schemas"].begin());
  expect_invalid(missing_kind);

  json duplicate_field = good;
  duplicate_field["schemas"][0]["optional"].push_back(duplicate_field["schemas"][0]["required"][0]);
  expect_invalid(duplicate_field);

  json bad_type = good;
  bad_type["schemas"][0]["required"][0]["type"] = "blob";
  expect_invalid(bad_type);

  json bad_version = good;
  bad_version["schemas"][0]["version"] = 0;
  expect_invalid(bad_version);

  expect_invalid(json::object());
}

json page_view() {
  return test::wire_event("01FX1E2K9XFP3JDVHETJQ4G0P8", "u1", "page_view", test::kMarch1, {{"page_id", "home"}});
}

TEST(ValidateEvent, AcceptsPageView) {
  const auto outcome = validate_event(page_view(), SchemaCatalog::builtin());
  EXPECT_TRUE(outcome.accepted()) << outcome.to_json().dump();
  EXPECT_EQ(outcome.to_json()["status"], "accepted");
}

TEST(ValidateEvent, UnknownKind) {
  json e = page_view();
  e["kind"] = "vid_play";
  const auto outcome = validate_event(e, SchemaCatalog::builtin());
  ASSERT_EQ(outcome.errors.size(), 1u);
  EXPECT_EQ(outcome.errors[0].code, ValidationCode::kUnknownKind);
  EXPECT_EQ(outcome.to_json()["status"], "rejected");
}

TEST(ValidateEvent, MissingRequiredPayloadField) {
  json e = page_view();
  e["kind"] = "purchase";
  e["payload"] = {{"item_id", "i1"}, {"currency", "EUR"}};
  const auto outcome = validate_event(e, SchemaCatalog::builtin());
  ASSERT_EQ(outcome.errors.size(), 1u);
  EXPECT_EQ(outcome.errors[0].code, ValidationCode::kMissingField);
  EXPECT_EQ(outcome.errors[0].path, "payload.amount");
}

TEST(ValidateEvent, ReportsEveryViolation) {
  json e = page_view();
  e["event_id"] = "not-a-ulid";
  e["client_ts"] = "2022-03-01T10:00:00";
  e["location"] = {{"lat", 95.0}, {"lon", 0.0}};
  e["schema_version"] = 7;
  e["payload"] = {{"page_id", 3}, {"colour", "red"}};
  e["extra"] = true;
  const auto outcome = validate_event(e, SchemaCatalog::builtin());
  EXPECT_TRUE(outcome.has(ValidationCode::kIdMalformed));
  EXPECT_TRUE(outcome.has(ValidationCode::kMalformedTimestamp));
  EXPECT_TRUE(outcome.has(ValidationCode::kLocationOutOfRange));
  EXPECT_TRUE(outcome.has(ValidationCode::kSchemaVersionUnknown));
  EXPECT_TRUE(outcome.has(ValidationCode::kUndeclaredField));

  json typed = page_view();
  typed["payload"] = {{"page_id", 3}, {"colour", "red"}};
  const auto payload_outcome = validate_event(typed, SchemaCatalog::builtin());
  EXPECT_TRUE(payload_outcome.has(ValidationCode::kTypeMismatch));
  EXPECT_TRUE(payload_outcome.has(ValidationCode::kUndeclaredField));
  EXPECT_EQ(payload_outcome.errors.size(), 2u);
}

TEST(ValidateEvent, OfflineConnectivityInvariant) {
  json e = page_view();
  e["connectivity"] = {{"online", false}, {"network_type", "wifi"}, {"speed_kbps", 10.0}};
  EXPECT_FALSE(validate_event(e, SchemaCatalog::builtin()).accepted());
  e["connectivity"] = {{"online", false}, {"network_type", "offline"}};
  EXPECT_TRUE(validate_event(e, SchemaCatalog::builtin()).accepted());
}

TEST(ValidateEvent, UserIdAndSemver) {
  json e = page_view();
  e["user_id"] = "";
  EXPECT_FALSE(validate_event(e, SchemaCatalog::builtin()).accepted());
  e["user_id"] = std::string(129, 'x');
  EXPECT_FALSE(validate_event(e, SchemaCatalog::builtin()).accepted());
  e["user_id"] = std::string(128, 'x');
  EXPECT_TRUE(validate_event(e, SchemaCatalog::builtin()).accepted());
  EXPECT_TRUE(is_semver("1.0.0"));
  EXPECT_TRUE(is_semver("2.10.3-rc.1+build.5"));
  EXPECT_FALSE(is_semver("1.0"));
  EXPECT_FALSE(is_semver("01.0.0"));
}

TEST(ValidateEvent, IsDeterministic) {
  const auto corpus = test::random_corpus({.seed = 8, .n_events = 300});
  for (const auto& e : corpus) {
    json broken = e;
    broken["payload"]["bogus"] = 1;
    ASSERT_TRUE(validate_event(e, SchemaCatalog::builtin()).accepted()) << e.dump();
    ASSERT_EQ(validate_event(broken, SchemaCatalog::builtin()), validate_event(broken, SchemaCatalog::builtin()));
  }
}

TEST(ValidationOutcome, JsonRoundTrip) {
  json e = page_view();
  e["kind"] = "purchase";
  const auto outcome = validate_event(e, SchemaCatalog::builtin());
  EXPECT_EQ(ValidationOutcome::from_json(outcome.to_json()), outcome);
}

TEST(CanonicalSerialize, IndependentOfFieldOrder) {
  const std::string a = canonical_dump(json::parse(
      R"({"event_id":"01FX1E2K9XFP3JDVHETJQ4G0P8","user_id":"u1","kind":"page_view","client_ts":"2022-03-01T10:00:00Z",
          "connectivity":{"online":true,"network_type":"wifi"},"sdk_version":"1.0.0","schema_version":1,
          "payload":{"page_id":"home","duration_ms":5}})"));
  const std::string b = canonical_dump(json::parse(
      R"({"payload":{"duration_ms":5,"page_id":"home"},"schema_version":1,"sdk_version":"1.0.0",
          "connectivity":{"network_type":"wifi","online":true},"client_ts":"2022-03-01T10:00:00Z",
          "kind":"page_view","user_id":"u1","event_id":"01FX1E2K9XFP3JDVHETJQ4G0P8"})"));
  EXPECT_EQ(a, b);
  EXPECT_EQ(canonical_serialize(parse_envelope(a)), a);
}

TEST(CanonicalSerialize, IsAFixpoint) {
  for (const auto& e : test::random_corpus({.seed = 21, .n_events = 500})) {
    const std::string once = canonical_serialize(envelope_from_json(e));
    const EventEnvelope parsed = parse_envelope(once);
    ASSERT_EQ(parsed, envelope_from_json(e));
    ASSERT_EQ(canonical_serialize(parsed), once);
  }
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(CanonicalDump, ShortestRoundTripNumbers) {
  EXPECT_EQ(canonical_dump(json(35.40259)), "35.40259");
  EXPECT_EQ(canonical_dump(json(5.0)), "5.0");
  EXPECT_EQ(canonical_dump(json(100000.0)), "100000.0");
  EXPECT_EQ(canonical_dump(json(-0.5)), "-0.5");
  EXPECT_EQ(canonical_dump(json(0.0001)), "0.0001");
  EXPECT_EQ(canonical_dump(json(0.00001)), "1e-05");
  EXPECT_EQ(canonical_dump(json(1e16)), "1e+16");
  EXPECT_EQ(canonical_dump(json(1.5e300)), "1.5e+300");
  EXPECT_EQ(canonical_dump(json(123456789012345.6)), "123456789012345.6");
  EXPECT_EQ(canonical_dump(json{{"b", 1}, {"a", {1.25, "x\n"}}}), R"({"a":[1.25,"x\n"],"b":1})");
}

TEST(CanonicalDump, DoublesRoundTrip) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 20000; ++i) {
    double v;
    const std::uint64_t bits = rng();
    std::memcpy(&v, &bits, sizeof v);
    if (!std::isfinite(v)) continue;
    const std::string text = canonical_dump(json(v));
    ASSERT_EQ(json::parse(text).get<double>(), v) << text;
  }
}

TEST(CanonicalSerialize, MatchesGoldenManifest) {
  const std::filesystem::path dir = FIELDLEDGER_GOLDEN_DIR;
  const json manifest = json::parse(slurp(dir / "envelopes.manifest.json"));
  std::istringstream lines(slurp(dir / "envelopes.ndjson"));
  std::string line;
  std::size_t i = 0;
  while (std::getline(lines, line)) {
    ASSERT_LT(i, manifest.size());
    const json doc = json::parse(line);
    ASSERT_TRUE(validate_event(doc, SchemaCatalog::builtin()).accepted()) << line;
    const std::string bytes = canonical_serialize(envelope_from_json(doc));
    EXPECT_EQ(manifest[i]["event_id"], doc["event_id"]);
    EXPECT_EQ(sha256_hex(bytes), manifest[i]["sha256"].get<std::string>()) << bytes;
    ++i;
  }
  EXPECT_EQ(i, 100u);
}

}  // namespace
}  // namespace fieldledger
