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

#include <cstddef>
#include <string>
#include <vector>

#include "edf/snapshot_io.hpp"

namespace edf {

/// Accuracy of one snapshot against the exact final result. Percentages are
/// in [0, 100]; mape is NaN when no nonzero cell was matched.
struct SnapshotScore {
  std::size_t index = 0;
  double t = 0.0;
  double wall_ms = 0.0;
  double mape = 0.0;
  double mae = 0.0;
  double recall = 0.0;
  double precision = 0.0;
  std::size_t matched_groups = 0;
  std::size_t cells = 0;
  std::size_t zero_cells = 0;  ///< matched cells whose true value is 0 (excluded from MAPE)
};

struct AccuracyReport {
  std::vector<SnapshotScore> snapshots;
};

/// Groups are matched on the key columns; numeric non-key columns are scored.
/// Throws ValidationError if key or column lists differ.
SnapshotScore score_snapshot(const ResultRecord& estimate, const ResultRecord& exact);
AccuracyReport score(const std::vector<ResultRecord>& stream, const ResultRecord& exact);

std::string to_json(const SnapshotScore& s);

}  // namespace edf
