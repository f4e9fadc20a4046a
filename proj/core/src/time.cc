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

#include "fieldledger/time.h"

#include <chrono>
#include <cstdio>

#include "fieldledger/error.h"

namespace fieldledger {
namespace {

using std::chrono::day;
using std::chrono::month;
using std::chrono::sys_days;
using std::chrono::year;
using std::chrono::year_month_day;

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  bool digits(int count, int& out) {
    if (pos_ + count > text_.size()) return false;
    int value = 0;
    for (int i = 0; i < count; ++i) {
      const char c = text_[pos_ + i];
      if (c < '0' || c > '9') return false;
      value = value * 10 + (c - '0');
    }
    pos_ += count;
    out = value;
    return true;
  }

  bool literal(char expected) {
    if (pos_ >= text_.size() || text_[pos_] != expected) return false;
    ++pos_;
    return true;
  }

  std::optional<char> peek() const {
    if (pos_ >= text_.size()) return std::nullopt;
    return text_[pos_];
  }

  void advance() { ++pos_; }
  bool done() const { return pos_ == text_.size(); }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Millis system_now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::optional<ParsedInstant> parse_instant(std::string_view text) {
  Cursor in(text);
  int y, mo, d, h, mi, s;
  if (!in.digits(4, y) || !in.literal('-') || !in.digits(2, mo) ||
      !in.literal('-') || !in.digits(2, d) || !in.literal('T') ||
      !in.digits(2, h) || !in.literal(':') || !in.digits(2, mi) ||
      !in.literal(':') || !in.digits(2, s)) {
    return std::nullopt;
  }
  if (h > 23 || mi > 59 || s > 59) return std::nullopt;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;

  int millis = 0;
  if (in.peek() == '.') {
    in.advance();
    int digit_count = 0;
    int scale = 100;
    while (in.peek() && *in.peek() >= '0' && *in.peek() <= '9') {
      if (digit_count < 3) millis += (*in.peek() - '0') * scale;
      scale /= 10;
      ++digit_count;
      in.advance();
    }
    if (digit_count == 0 || digit_count > 9) return std::nullopt;
  }

  int offset_minutes = 0;
  const auto designator = in.peek();
  if (!designator) return std::nullopt;
  if (*designator == 'Z') {
    in.advance();
  } else if (*designator == '+' || *designator == '-') {
    const int sign = *designator == '-' ? -1 : 1;
    in.advance();
    int oh, om;
    if (!in.digits(2, oh) || !in.literal(':') || !in.digits(2, om)) {
      return std::nullopt;
    }
    if (oh > 23 || om > 59) return std::nullopt;
    offset_minutes = sign * (oh * 60 + om);
  } else {
    return std::nullopt;
  }
  if (!in.done()) return std::nullopt;

  const auto days = sys_days{ymd}.time_since_epoch().count();
  const Millis local_ms =
      ((static_cast<Millis>(days) * 24 + h) * 60 + mi) * 60'000 +
      static_cast<Millis>(s) * 1000 + millis;
  return ParsedInstant{local_ms - static_cast<Millis>(offset_minutes) * 60'000,
                       offset_minutes};
}

Millis normalize_timestamp(std::string_view client_ts, std::int64_t skew_ms) {
  const auto parsed = parse_instant(client_ts);
  if (!parsed) {
    throw Error(Errc::kMalformedTimestamp,
                "not an ISO-8601 instant with offset: '" +
                    std::string(client_ts) + "'");
  }
  return parsed->utc_ms + skew_ms;
}

std::string format_instant(Millis utc_ms, int offset_minutes) {
  const Millis local = utc_ms + static_cast<Millis>(offset_minutes) * 60'000;
  const std::int64_t day_number = utc_day_number(local);
  const Millis in_day = local - day_number * 86'400'000;
  const year_month_day ymd{sys_days{std::chrono::days{day_number}}};

  char buf[48];
  const int h = static_cast<int>(in_day / 3'600'000);
  const int mi = static_cast<int>(in_day / 60'000 % 60);
  const int s = static_cast<int>(in_day / 1000 % 60);
  const int ms = static_cast<int>(in_day % 1000);
  int n = std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%03d",
                        static_cast<int>(ymd.year()),
                        static_cast<unsigned>(ymd.month()),
                        static_cast<unsigned>(ymd.day()), h, mi, s, ms);
  if (offset_minutes == 0) {
    std::snprintf(buf + n, sizeof buf - n, "Z");
  } else {
    const int magnitude = offset_minutes < 0 ? -offset_minutes : offset_minutes;
    std::snprintf(buf + n, sizeof buf - n, "%c%02d:%02d",
                  offset_minutes < 0 ? '-' : '+', magnitude / 60,
                  magnitude % 60);
  }
  return buf;
}

std::int64_t utc_day_number(Millis utc_ms) {
  std::int64_t day_number = utc_ms / 86'400'000;
  if (utc_ms % 86'400'000 < 0) --day_number;
  return day_number;
}

std::string format_day(std::int64_t day_number) {
  const year_month_day ymd{sys_days{std::chrono::days{day_number}}};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()));
  return buf;
}

std::optional<std::int64_t> parse_day(std::string_view text) {
  Cursor in(text);
  int y, mo, d;
  if (!in.digits(4, y) || !in.literal('-') || !in.digits(2, mo) ||
      !in.literal('-') || !in.digits(2, d) || !in.done()) {
    return std::nullopt;
  }
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return sys_days{ymd}.time_since_epoch().count();
}

}  // namespace fieldledger
