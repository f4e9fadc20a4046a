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

#ifndef FIELDLEDGER_SDK_TRANSPORT_H_
#define FIELDLEDGER_SDK_TRANSPORT_H_

#include <chrono>
#include <cstddef>
#include <memory>
#include <string>

#include "fieldledger/batch.h"
#include "fieldledger/time.h"

namespace fieldledger::sdk {

struct UploadRequest {
  std::string idempotency_key;
  std::string body;
  Millis sent_at = 0;
  std::size_t event_count = 0;
};

struct UploadOutcome {
  bool delivered = false;  // a response reached the device
  int http_status = 0;
  BatchResponse response;  // meaningful when delivered with status 200
  Millis elapsed_ms = 0;
  std::string error;
};

// Batch-upload channel. Implementations report faults in the outcome rather
// than throwing.
class BatchTransport {
 public:
  virtual ~BatchTransport() = default;
  virtual UploadOutcome upload(const UploadRequest& request) = 0;
};

// POSTs to {base_url}/v1/events:batch with an Idempotency-Key header.
class HttpTransport final : public BatchTransport {
 public:
  explicit HttpTransport(std::string base_url,
                         std::chrono::milliseconds timeout = std::chrono::seconds(10));
  ~HttpTransport() override;

  UploadOutcome upload(const UploadRequest& request) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace fieldledger::sdk

#endif  // FIELDLEDGER_SDK_TRANSPORT_H_
