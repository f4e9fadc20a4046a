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

#include "fieldledger/api/server.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <thread>

#include <httplib.h>

#include "fieldledger/event.h"

namespace fieldledger::api {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kJson = "application/json";

void reply(httplib::Response& res, int status, const std::string& body) {
  res.status = status;
  res.set_content(body, kJson);
}

void reply_json(httplib::Response& res, const json& doc) { reply(res, 200, canonical_dump(doc)); }

std::optional<std::string> param(const httplib::Request& req, const char* key) {
  if (!req.has_param(key)) return std::nullopt;
  return req.get_param_value(key);
}

std::int64_t parse_int(const std::string& text, Errc code, const std::string& what) {
  std::int64_t v = 0;
  const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size()) throw Error(code, what + " must be an integer");
  return v;
}

// Either epoch milliseconds or an ISO-8601 instant with offset.
Millis parse_bound(const std::string& text, const char* name) {
  if (!text.empty() && (std::isdigit(static_cast<unsigned char>(text[0])) || text[0] == '-') &&
      text.find('T') == std::string::npos) {
    return parse_int(text, Errc::kBadFilter, name);
  }
  const auto p = parse_instant(text);
  if (!p) throw Error(Errc::kBadFilter, std::string(name) + " is not a valid instant");
  return p->utc_ms;
}

ingest::PageRequest page_of(const httplib::Request& req) {
  ingest::PageRequest page;
  if (auto v = param(req, "limit")) {
    const auto n = parse_int(*v, Errc::kBadFilter, "limit");
    if (n <= 0) throw Error(Errc::kBadFilter, "limit must be 1..1000");
    page.limit = static_cast<std::size_t>(n);
  }
  page.cursor = param(req, "cursor");
  return page;
}

template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const Error& e) {
      reply(res, http_status_for(e.code()), error_body(e.code(), e.what()));
    } catch (const json::exception& e) {
      reply(res, 400, error_body(Errc::kInvalidArgument, e.what()));
    } catch (const fs::filesystem_error& e) {
      reply(res, 503, error_body(Errc::kStorageUnavailable, e.what()));
    } catch (const std::exception& e) {
      reply(res, 500, canonical_dump(json{{"error", "Internal"}, {"message", e.what()}}));
    }
  };
}

}  // namespace

int http_status_for(Errc code) noexcept {
  switch (code) {
    case Errc::kInvalidArgument:
    case Errc::kBatchMalformed:
    case Errc::kBadFilter:
    case Errc::kMalformedTimestamp:
    case Errc::kLocationOutOfRange:
      return 400;
    case Errc::kNotFound:
    case Errc::kUnknownVersion:
    case Errc::kUnknownTable:
    case Errc::kUnknownRun:
      return 404;
    case Errc::kVersionConflict:
    case Errc::kRunClosed:
      return 409;
    case Errc::kStorageUnavailable:
      return 503;
    default:
      return 500;
  }
}

std::string error_body(Errc code, std::string_view message) {
  return canonical_dump(json{{"error", errc_name(code)}, {"message", std::string(message)}});
}

HttpReply handle_batch_post(ingest::IngestionService& service, std::string_view body,
                            std::string_view idempotency_key, Millis server_now) {
  try {
    const BatchResponse r = service.ingest_body(body, server_now, idempotency_key);
    return {200, canonical_dump(r.to_json())};
  } catch (const Error& e) {
    return {http_status_for(e.code()), error_body(e.code(), e.what())};
  }
}

struct ApiServer::Impl {
  ingest::IngestionService& service;
  ExperimentTracker* tracker;
  ApiOptions options;
  httplib::Server http;
  std::thread worker;

  Impl(ingest::IngestionService& s, ExperimentTracker* t, ApiOptions o)
      : service(s), tracker(t), options(std::move(o)) {
    const int threads = options.worker_threads;
    http.new_task_queue = [threads] { return new httplib::ThreadPool(static_cast<std::size_t>(threads)); };
    http.set_payload_max_length(16 * 1024 * 1024);
    routes();
    if (options.console_dir) {
      if (!http.set_mount_point("/console", options.console_dir->string())) {
        throw Error(Errc::kInvalidArgument, "console directory not found: " + options.console_dir->string());
      }
    }
  }

  Table& known_table(const std::string& name) {
    const auto names = service.store().tables();
    if (std::find(names.begin(), names.end(), name) == names.end()) {
      throw Error(Errc::kUnknownTable, "no table named " + name);
    }
    return service.store().table(name);
  }

  ExperimentTracker& runs() {
    if (!tracker) throw Error(Errc::kUnknownRun, "run tracking is not enabled");
    return *tracker;
  }

  void routes() {
    http.Post(std::string(kBatchPath), [this](const httplib::Request& req, httplib::Response& res) {
      const std::string key = req.get_header_value("Idempotency-Key");
      HttpReply r;
      try {
        r = handle_batch_post(service, req.body, key, options.clock());
      } catch (const std::exception& e) {
        r = {503, error_body(Errc::kStorageUnavailable, e.what())};
      }
      if (!key.empty()) res.set_header("Idempotency-Key", key);
      reply(res, r.status, r.body);
    });

    http.Get("/v1/events", guarded([this](const httplib::Request& req, httplib::Response& res) {
               ingest::EventFilter f;
               f.user_id = param(req, "user_id");
               f.kind = param(req, "kind");
               if (auto v = param(req, "from")) f.from = parse_bound(*v, "from");
               if (auto v = param(req, "to")) f.to = parse_bound(*v, "to");
               if (auto v = param(req, "online")) {
                 if (*v != "true" && *v != "false") throw Error(Errc::kBadFilter, "online must be true or false");
                 f.online = *v == "true";
               }
               const auto page = service.query_events(f, page_of(req));
               json doc = {{"events", page.events}, {"version", page.version}, {"next_cursor", nullptr}};
               if (page.next_cursor) doc["next_cursor"] = *page.next_cursor;
               reply_json(res, doc);
             }));

    http.Get("/v1/quarantine", guarded([this](const httplib::Request& req, httplib::Response& res) {
               const auto page = service.list_quarantine(page_of(req));
               json doc = {{"records", page.records}, {"version", page.version}, {"next_cursor", nullptr}};
               if (page.next_cursor) doc["next_cursor"] = *page.next_cursor;
               reply_json(res, doc);
             }));

    http.Post("/v1/curation/flags", guarded([this](const httplib::Request& req, httplib::Response& res) {
                const json body = json::parse(req.body, nullptr, false);
                if (body.is_discarded() || !body.is_object()) {
                  throw Error(Errc::kInvalidArgument, "body must be a JSON object");
                }
                for (const char* k : {"event_id", "verdict", "actor"}) {
                  if (!body.contains(k) || !body[k].is_string()) {
                    throw Error(Errc::kInvalidArgument, std::string(k) + " must be a string");
                  }
                }
                const auto verdict = ingest::verdict_from_label(body["verdict"].get<std::string>());
                if (!verdict) throw Error(Errc::kInvalidArgument, "verdict must be invalid, suspicious or cleared");
                std::string note;
                if (body.contains("note")) {
                  if (!body["note"].is_string()) throw Error(Errc::kInvalidArgument, "note must be a string");
                  note = body["note"].get<std::string>();
                }
                const auto flag = service.flag_record(body["event_id"].get<std::string>(), *verdict, note,
                                                      body["actor"].get<std::string>(), options.clock());
                reply_json(res, flag.to_json());
              }));

    http.Get("/v1/curation/flags", guarded([this](const httplib::Request& req, httplib::Response& res) {
               json list = json::array();
               for (const auto& f : service.flags(param(req, "event_id"))) list.push_back(f.to_json());
               reply_json(res, {{"flags", list}});
             }));

    http.Get("/v1/tables", guarded([this](const httplib::Request&, httplib::Response& res) {
               json list = json::array();
               for (const auto& name : service.store().tables()) {
                 list.push_back({{"name", name}, {"latest_version", service.store().table(name).latest_version()}});
               }
               reply_json(res, {{"tables", list}});
             }));

    http.Get(R"(/v1/tables/([a-z0-9_]{1,64})/versions)",
             guarded([this](const httplib::Request& req, httplib::Response& res) {
               Table& t = known_table(req.matches[1]);
               json list = json::array();
               for (const auto& c : t.history()) list.push_back(c.to_json());
               reply_json(res, {{"table", t.name()}, {"versions", list}});
             }));

    http.Get(R"(/v1/tables/([a-z0-9_]{1,64})/rows)",
             guarded([this](const httplib::Request& req, httplib::Response& res) {
               Table& t = known_table(req.matches[1]);
               Version v = t.latest_version();
               if (auto p = param(req, "version")) v = parse_int(*p, Errc::kInvalidArgument, "version");
               const std::string scope = param(req, "scope").value_or("snapshot");
               if (scope != "snapshot" && scope != "commit") {
                 throw Error(Errc::kInvalidArgument, "scope must be snapshot or commit");
               }
               const RowSet rows = scope == "commit" ? t.read_commit(v) : t.read_at(v);
               reply_json(res, {{"table", t.name()},
                                {"version", v},
                                {"scope", scope},
                                {"digest", rows.digest()},
                                {"rows", rows.rows}});
             }));

    http.Get("/v1/runs", guarded([this](const httplib::Request&, httplib::Response& res) {
               json list = json::array();
               for (const auto& r : runs().list()) list.push_back(r.to_json());
               reply_json(res, {{"runs", list}});
             }));

    http.Get(R"(/v1/runs/([0-9A-Za-z]{26}))", guarded([this](const httplib::Request& req, httplib::Response& res) {
               reply_json(res, runs().get(req.matches[1]).to_json());
             }));
  }
};

ApiServer::ApiServer(ingest::IngestionService& service, ExperimentTracker* tracker, ApiOptions options)
    : impl_(std::make_unique<Impl>(service, tracker, std::move(options))) {}

ApiServer::~ApiServer() { stop(); }

int ApiServer::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->http.bind_to_any_port(host);
  } else if (!impl_->http.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound <= 0) throw Error(Errc::kStorageUnavailable, "cannot bind " + host + ":" + std::to_string(port));
  impl_->worker = std::thread([this] { impl_->http.listen_after_bind(); });
  impl_->http.wait_until_ready();
  return bound;
}

void ApiServer::run(const std::string& host, int port) {
  if (!impl_->http.listen(host, port)) {
    throw Error(Errc::kStorageUnavailable, "cannot listen on " + host + ":" + std::to_string(port));
  }
}

void ApiServer::stop() {
  if (!impl_) return;
  impl_->http.stop();
  if (impl_->worker.joinable()) impl_->worker.join();
}

}  // namespace fieldledger::api
