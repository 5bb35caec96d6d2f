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

#include <string>

#include "edf/executor.hpp"
#include "edf/query_graph.hpp"
#include "edf/row_batch.hpp"

namespace edf {

/// Exact answer of a query computed in one pass over every partition, without
/// incremental state. Aggregates are computed directly from each group's rows.
RowBatch evaluate_batch(const QueryGraph& graph, const Bindings& bindings);

struct BatchDiff {
  bool equal = true;
  std::string message;
};

/// Order-insensitive comparison. int64 and utf8 cells must match exactly;
/// float64 cells within `rel_tol` relative (0 requires identical bits up to
/// signed zero).
BatchDiff compare_batches(const RowBatch& actual, const RowBatch& expected, double rel_tol);

}  // namespace edf
