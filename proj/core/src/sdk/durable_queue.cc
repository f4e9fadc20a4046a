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

#include "fieldledger/sdk/durable_queue.h"

#include <unistd.h>

#include <cstring>
#include <fstream>
#include <sstream>

#include "fieldledger/digest.h"
#include "fieldledger/error.h"

namespace fieldledger::sdk {
namespace {

namespace fs = std::filesystem;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32(std::string_view in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(in[at + i]);
  return v;
}

}  // namespace

std::string encode_queue_record(std::string_view envelope_bytes) {
  std::string out;
  out.reserve(envelope_bytes.size() + 8);
  put_u32(out, static_cast<std::uint32_t>(envelope_bytes.size()));
  put_u32(out, crc32c(envelope_bytes));
  out.append(envelope_bytes);
  return out;
}

DurableQueue::DurableQueue(fs::path path, QueueOptions options)
    : path_(std::move(path)), options_(options) {
  restore();
  open_for_append();
}

DurableQueue::~DurableQueue() {
  if (out_ != nullptr) std::fclose(out_);
}

void DurableQueue::restore() {
  if (path_.has_parent_path()) fs::create_directories(path_.parent_path());
  std::string data;
  if (fs::exists(path_)) {
    std::ifstream in(path_, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    data = std::move(ss).str();
  }

  std::size_t valid = 0;
  if (data.size() < sizeof kQueueMagic) {
    // Empty or torn header: acceptable only if what exists is a prefix of it.
    if (std::memcmp(data.data(), kQueueMagic, data.size()) != 0) {
      throw Error(Errc::kStorageCorrupt, path_.string() + ": unreadable queue header");
    }
    if (!data.empty()) ++truncation_warnings_;
    std::ofstream(path_, std::ios::binary | std::ios::trunc).write(kQueueMagic, sizeof kQueueMagic);
    return;
  }
  if (std::memcmp(data.data(), kQueueMagic, sizeof kQueueMagic) != 0) {
    throw Error(Errc::kStorageCorrupt, path_.string() + ": bad queue magic");
  }

  valid = sizeof kQueueMagic;
  std::size_t pos = valid;
  while (pos < data.size()) {
    if (data.size() - pos < 8) break;
    const std::uint32_t len = get_u32(data, pos);
    const std::uint32_t crc = get_u32(data, pos + 4);
    if (data.size() - pos - 8 < len) break;
    std::string_view bytes(data.data() + pos + 8, len);
    if (crc32c(bytes) != crc) break;
    try {
      entries_.push_back({parse_envelope(bytes), std::string(bytes)});
    } catch (const Error&) {
      break;
    }
    pos += 8 + len;
    valid = pos;
  }
  if (valid < data.size()) {
    ++truncation_warnings_;
    fs::resize_file(path_, valid);
  }
}

void DurableQueue::open_for_append() {
  if (out_ != nullptr) std::fclose(out_);
  out_ = std::fopen(path_.c_str(), "ab");
  if (out_ == nullptr) {
    throw Error(Errc::kStorageCorrupt, path_.string() + ": cannot open for append");
  }
}

std::size_t DurableQueue::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

void DurableQueue::append(const EventEnvelope& envelope) {
  std::string bytes = canonical_serialize(envelope);
  const std::string record = encode_queue_record(bytes);
  std::lock_guard lock(mu_);
  if (entries_.size() >= options_.capacity) {
    throw Error(Errc::kQueueFull, "queue holds " + std::to_string(entries_.size()) + " events");
  }
  if (std::fwrite(record.data(), 1, record.size(), out_) != record.size() || std::fflush(out_) != 0) {
    throw Error(Errc::kStorageCorrupt, path_.string() + ": append failed");
  }
  if (options_.fsync) ::fsync(::fileno(out_));
  entries_.push_back({envelope, std::move(bytes)});
}

std::vector<QueuedEvent> DurableQueue::peek(std::size_t max_count, std::size_t max_bytes) const {
  std::lock_guard lock(mu_);
  std::vector<QueuedEvent> out;
  std::size_t bytes = 0;
  for (const auto& e : entries_) {
    if (out.size() >= max_count) break;
    if (!out.empty() && bytes + e.bytes.size() > max_bytes) break;
    bytes += e.bytes.size();
    out.push_back(e);
  }
  return out;
}

void DurableQueue::pop_front(std::size_t n) {
  std::lock_guard lock(mu_);
  n = std::min(n, entries_.size());
  if (n == 0) return;
  entries_.erase(entries_.begin(), entries_.begin() + static_cast<std::ptrdiff_t>(n));
  rewrite();
}

void DurableQueue::rewrite() {
  std::string data(kQueueMagic, sizeof kQueueMagic);
  for (const auto& e : entries_) data += encode_queue_record(e.bytes);
  const fs::path tmp = path_.string() + ".rewrite";
  {
    std::FILE* f = std::fopen(tmp.c_str(), "wb");
    if (f == nullptr || std::fwrite(data.data(), 1, data.size(), f) != data.size()) {
      if (f != nullptr) std::fclose(f);
      throw Error(Errc::kStorageCorrupt, tmp.string() + ": rewrite failed");
    }
    std::fflush(f);
    if (options_.fsync) ::fsync(::fileno(f));
    std::fclose(f);
  }
  std::fclose(out_);
  out_ = nullptr;
  fs::rename(tmp, path_);
  open_for_append();
}

std::vector<EventEnvelope> DurableQueue::snapshot() const {
  std::lock_guard lock(mu_);
  std::vector<EventEnvelope> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.envelope);
  return out;
}

std::unique_ptr<DurableQueue> restore_queue(const fs::path& path, QueueOptions options) {
  return std::make_unique<DurableQueue>(path, options);
}

}  // namespace fieldledger::sdk
