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

#ifndef FIELDLEDGER_SDK_DURABLE_QUEUE_H_
#define FIELDLEDGER_SDK_DURABLE_QUEUE_H_

// Append-only on-device event queue.
//
// File format (little-endian):
//   "FLQ1"
//   repeated: u32 length | u32 crc32c(bytes) | bytes (canonical envelope)
//
// Appends go to the end of the file. Removing delivered events from the head
// rewrites the remainder to a temp file and renames it over the original.

#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "fieldledger/event.h"

namespace fieldledger::sdk {

inline constexpr char kQueueMagic[4] = {'F', 'L', 'Q', '1'};
inline constexpr std::size_t kDefaultQueueCapacity = 100000;

struct QueueOptions {
  std::size_t capacity = kDefaultQueueCapacity;
  bool fsync = false;
};

struct QueuedEvent {
  EventEnvelope envelope;
  std::string bytes;  // canonical serialization as stored on disk
};

// Encodes one record frame.
std::string encode_queue_record(std::string_view envelope_bytes);

class DurableQueue {
 public:
  // Replays `path` (creating it if absent). A torn or corrupt tail record is
  // truncated and counted in truncation_warnings(). Throws
  // Error(kStorageCorrupt) only when the file header is unreadable.
  explicit DurableQueue(std::filesystem::path path, QueueOptions options = {});
  ~DurableQueue();
  DurableQueue(const DurableQueue&) = delete;
  DurableQueue& operator=(const DurableQueue&) = delete;

  std::size_t size() const;
  bool empty() const { return size() == 0; }
  std::size_t capacity() const { return options_.capacity; }
  std::size_t truncation_warnings() const { return truncation_warnings_; }
  const std::filesystem::path& path() const { return path_; }

  // Throws Error(kQueueFull) at capacity; the queue is unchanged.
  void append(const EventEnvelope& envelope);

  // Head of the queue, bounded by count and total serialized bytes. At least
  // one event is returned when the queue is non-empty.
  std::vector<QueuedEvent> peek(std::size_t max_count, std::size_t max_bytes) const;

  // Removes the first n events, durably.
  void pop_front(std::size_t n);

  std::vector<EventEnvelope> snapshot() const;

 private:
  void restore();
  void open_for_append();
  void rewrite();

  std::filesystem::path path_;
  QueueOptions options_;
  std::size_t truncation_warnings_ = 0;

  mutable std::mutex mu_;
  std::deque<QueuedEvent> entries_;
  std::FILE* out_ = nullptr;
};

std::unique_ptr<DurableQueue> restore_queue(const std::filesystem::path& path,
                                            QueueOptions options = {});

}  // namespace fieldledger::sdk

#endif  // FIELDLEDGER_SDK_DURABLE_QUEUE_H_
