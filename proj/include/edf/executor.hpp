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

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "edf/confidence.hpp"
#include "edf/operators.hpp"
#include "edf/query_graph.hpp"
#include "edf/table.hpp"

namespace edf {

/// Table bindings of a run: a partition source per table and optionally the
/// order in which its partitions are emitted (natural order by default).
struct Bindings {
  std::map<std::string, std::shared_ptr<const PartitionSource>> sources;
  std::map<std::string, std::vector<std::size_t>> orders;

  std::map<std::string, SchemaPtr> schemas() const;
  std::vector<std::size_t> order_of(const std::string& table) const;
};

/// Opens `<data_dir>/<table>` for each table name with CSV sources.
Bindings bind_directory(const std::filesystem::path& data_dir, const std::map<std::string, std::string>& tables);

struct TraceEntry {
  std::string node;
  std::int64_t start_ns = 0;
  std::int64_t end_ns = 0;
  std::int64_t partition = -1;
};

/// Activity log: one entry per message a node processes.
class TraceLog {
 public:
  void record(TraceEntry e);
  std::vector<TraceEntry> entries() const;
  /// True if two different nodes have intersecting active intervals.
  bool has_overlap() const;
  void write(const std::filesystem::path& path) const;

 private:
  mutable std::mutex mu_;
  std::vector<TraceEntry> entries_;
};

struct ColumnIntervals {
  std::size_t column = 0;
  std::vector<ConfidenceInterval> rows;
  std::vector<std::uint8_t> unstable;
};

struct SnapshotRecord {
  std::size_t index = 0;
  Progress progress;
  std::chrono::nanoseconds wall{0};
  BatchPtr rows;
  std::vector<ColumnIntervals> ci;

  double t() const { return progress.t(); }
};

struct RunOptions {
  std::size_t channel_capacity = 4;
  ExtrinsicOptions extrinsic;
  std::optional<double> ci_delta;  ///< emit Chebyshev intervals at level 1 − delta
  TraceLog* trace = nullptr;
};

using SnapshotSink = std::function<void(const SnapshotRecord&)>;

/// Pipelined execution: one worker thread per node, bounded inboxes. Calls
/// `sink` once per message leaving the output node. Throws ExecutionError if
/// any worker fails.
void run(const QueryGraph& graph, const Bindings& bindings, const RunOptions& options, const SnapshotSink& sink);
std::vector<SnapshotRecord> run(const QueryGraph& graph, const Bindings& bindings, const RunOptions& options = {});

/// Same semantics on the calling thread, node by node in topological order.
void run_sequential(const QueryGraph& graph, const Bindings& bindings, const RunOptions& options,
                    const SnapshotSink& sink);
std::vector<SnapshotRecord> run_sequential(const QueryGraph& graph, const Bindings& bindings,
                                           const RunOptions& options = {});

/// Builds snapshot records from the output node's message stream.
class SnapshotAssembler {
 public:
  SnapshotAssembler(SchemaPtr schema, std::optional<double> ci_delta);

  SnapshotRecord on_message(const Message& msg, std::chrono::nanoseconds wall);
  std::size_t count() const { return next_index_; }

 private:
  IntrinsicState state_;
  std::optional<double> ci_delta_;
  std::size_t next_index_ = 0;
};

}  // namespace edf
