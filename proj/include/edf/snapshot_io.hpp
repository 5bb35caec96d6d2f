// Copyright 2026 The edfola Authors
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

#pragma once

#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "edf/executor.hpp"
#include "edf/value.hpp"

namespace edf {

/// One line of the snapshot stream. Field order is fixed:
///   index, t, processed, total, wall_ms, key, columns, rows, ci (optional)
/// `rows` holds one object per row, column -> value. `ci` maps a column to
/// per-row [lo, hi] pairs; infinite bounds are written as null.
std::string snapshot_to_json(const SnapshotRecord& s);

/// Exact result written as a final snapshot (index 0, t = 1).
std::string exact_to_json(const RowBatch& rows);

/// Parsed snapshot line used for scoring.
struct ResultRecord {
  std::size_t index = 0;
  double t = 1.0;
  double wall_ms = 0.0;
  std::vector<std::string> key;
  std::vector<std::string> columns;
  std::vector<std::map<std::string, Value>> rows;
};

ResultRecord parse_result_line(const std::string& line);
std::vector<ResultRecord> read_result_stream(std::istream& in);

}  // namespace edf
