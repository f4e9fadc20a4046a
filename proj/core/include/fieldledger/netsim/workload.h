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

#ifndef FIELDLEDGER_NETSIM_WORKLOAD_H_
#define FIELDLEDGER_NETSIM_WORKLOAD_H_

#include <cstddef>
#include <map>
#include <random>
#include <string>

#include <json.hpp>

#include "fieldledger/event.h"

namespace fieldledger::netsim {

// Weighted draw over kind labels. `mix` must hold at least one positive weight.
EventKind sample_kind(const std::map<std::string, double>& mix, std::mt19937_64& rng);

// A payload satisfying the builtin schema for `kind`. Content references are
// drawn from c0..c{n_contents-1}.
nlohmann::json sample_payload(EventKind kind, std::mt19937_64& rng, std::size_t n_contents);

}  // namespace fieldledger::netsim

#endif  // FIELDLEDGER_NETSIM_WORKLOAD_H_
