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

#include <httplib.h>

#include "fieldledger/sdk/transport.h"

namespace fieldledger::sdk {

struct HttpTransport::Impl {
  explicit Impl(const std::string& base_url) : client(base_url) {}
  httplib::Client client;
};

HttpTransport::HttpTransport(std::string base_url, std::chrono::milliseconds timeout)
    : impl_(std::make_unique<Impl>(base_url)) {
  impl_->client.set_connection_timeout(timeout);
  impl_->client.set_read_timeout(timeout);
  impl_->client.set_write_timeout(timeout);
  impl_->client.set_keep_alive(true);
}

HttpTransport::~HttpTransport() = default;

UploadOutcome HttpTransport::upload(const UploadRequest& request) {
  UploadOutcome out;
  const auto start = std::chrono::steady_clock::now();
  httplib::Headers headers = {{"Idempotency-Key", request.idempotency_key}};
  auto res = impl_->client.Post(std::string(kBatchPath), headers, request.body, "application/json");
  out.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  if (!res) {
    out.error = httplib::to_string(res.error());
    return out;
  }
  out.delivered = true;
  out.http_status = res->status;
  if (res->status == 200) {
    auto doc = nlohmann::json::parse(res->body, nullptr, false);
    if (doc.is_discarded()) {
      out.delivered = false;
      out.error = "unparseable response body";
      return out;
    }
    try {
      out.response = BatchResponse::from_json(doc);
    } catch (const std::exception& e) {
      out.delivered = false;
      out.error = e.what();
    }
  } else {
    out.error = res->body;
  }
  return out;
}

}  // namespace fieldledger::sdk
