// Copyright 2026 The stratsat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "stratsat/interpreter.hpp"
#include "stratsat/metrics.hpp"
#include "stratsat/motif.hpp"
#include "stratsat/partition.hpp"

namespace stratsat {

inline constexpr int kRecordFormatVersion = 1;

/// Machine fields are wall time and peak RSS.
nlohmann::json to_json(const RunRecord &r, bool include_machine = true);
RunRecord run_record_from_json(const nlohmann::json &j);

nlohmann::json to_json(const TraceEntry &t);
TraceEntry trace_entry_from_json(const nlohmann::json &j);

/// JSON Lines: a header object, then one record per line.
std::string write_records(const std::vector<RunRecord> &records, bool include_machine = true);
/// Throws ParseError on a missing or unsupported header or malformed line.
std::vector<RunRecord> read_records(std::string_view text);

nlohmann::json to_json(const DependencyGraph &g);
nlohmann::json to_json(const PartitionAdvice &a);
nlohmann::json to_json(const SweepResult &s);
nlohmann::json to_json(const Motif &m);
nlohmann::json to_json(const Comparison &c);
nlohmann::json to_json(const Explanation &e);

}  // namespace stratsat
