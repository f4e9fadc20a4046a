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

#ifndef FIELDLEDGER_TOOLS_TOOL_UTIL_H_
#define FIELDLEDGER_TOOLS_TOOL_UTIL_H_

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <json.hpp>

#include "fieldledger/error.h"
#include "fieldledger/event.h"

namespace fieldledger::tools {

inline std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

// Runs directly under the data root; experiment runs live in <root>/runs.
inline std::filesystem::path runs_dir(const std::filesystem::path& data_dir) { return data_dir / "runs"; }

inline void print_json(const nlohmann::json& doc, bool pretty = true) {
  std::cout << (pretty ? doc.dump(2) : canonical_dump(doc)) << "\n";
}

// Maps an error to a process exit status: 2 for caller mistakes, 1 otherwise.
template <typename Fn>
int run_guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    std::cerr << "error: " << errc_name(e.code()) << ": " << e.what() << "\n";
    switch (e.code()) {
      case Errc::kInvalidArgument:
      case Errc::kUnknownVersion:
      case Errc::kUnknownTable:
      case Errc::kUnknownRun:
        return 2;
      default:
        return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace fieldledger::tools

#endif  // FIELDLEDGER_TOOLS_TOOL_UTIL_H_
