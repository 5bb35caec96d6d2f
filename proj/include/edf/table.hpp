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
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "edf/row_batch.hpp"
#include "edf/schema.hpp"
#include "edf/state.hpp"

namespace edf {

struct PartitionInfo {
  std::filesystem::path file;
  std::uint64_t row_count = 0;
};

/// Table metadata: schema, keys and the ordered partition list.
///
/// On disk a table is a directory holding `meta` plus CSV partition files:
///
///     # comment
///     name lineitem
///     attribute orderkey:int64:constant
///     attribute qty:float64:constant
///     primary_key orderkey,linenumber
///     clustering_key orderkey
///     partition part-00000.csv 1000
///
/// Partition paths are relative to the table directory. A clustered table
/// keeps its partitions in clustering-key order and no clustering-key value
/// spans two partitions.
struct TableMeta {
  std::string name;
  SchemaPtr schema;
  std::filesystem::path directory;
  std::vector<PartitionInfo> partitions;
  std::uint64_t total_rows = 0;

  bool clustered() const { return schema->clustering_key().has_value(); }
};

/// Parses and validates `<dir>/meta`. Row counts are checked against the
/// files lazily, in read_partition().
TableMeta load_meta(const std::filesystem::path& dir);

void write_meta(const TableMeta& meta);

/// Parses a CSV partition file (header row required, no empty cells).
RowBatch read_csv(const std::filesystem::path& file, SchemaPtr schema);
void write_csv(const std::filesystem::path& file, const RowBatch& batch);

/// Partition `index` with the progress reached after it when partitions are
/// consumed in natural order.
std::pair<RowBatch, Progress> read_partition(const TableMeta& meta, std::size_t index);

/// Progress after consuming the partitions `order[0..=position]`.
Progress progress_after(const TableMeta& meta, std::span<const std::size_t> order, std::size_t position);

/// Deterministic permutation of partition indices. Seed 0 is the identity.
/// Clustered tables are refused unless `force` is set.
std::vector<std::size_t> shuffle_order(const TableMeta& meta, std::uint64_t seed, bool force = false);

/// Seeded Fisher-Yates permutation of 0..n-1 (identity for seed 0).
std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed);

/// Source of partition batches for reader nodes. Implementations must be
/// safe to call from several workers.
class PartitionSource {
 public:
  virtual ~PartitionSource() = default;
  virtual const TableMeta& meta() const = 0;
  virtual BatchPtr load(std::size_t index) const = 0;
};

/// Parses partitions from disk on every load.
class CsvPartitionSource final : public PartitionSource {
 public:
  explicit CsvPartitionSource(TableMeta meta) : meta_(std::move(meta)) {}
  const TableMeta& meta() const override { return meta_; }
  BatchPtr load(std::size_t index) const override;

 private:
  TableMeta meta_;
};

/// Keeps parsed partitions in memory; used by replay-heavy experiments.
class CachedPartitionSource final : public PartitionSource {
 public:
  explicit CachedPartitionSource(TableMeta meta);
  /// In-memory table with no backing files.
  CachedPartitionSource(TableMeta meta, std::vector<BatchPtr> partitions);

  const TableMeta& meta() const override { return meta_; }
  BatchPtr load(std::size_t index) const override;

 private:
  TableMeta meta_;
  mutable std::mutex mu_;
  mutable std::vector<BatchPtr> cache_;
};

/// Builds metadata for an in-memory table split into the given batches.
TableMeta make_memory_meta(std::string name, SchemaPtr schema, std::span<const BatchPtr> partitions);

/// Writes a table directory: `meta` and one CSV per partition.
TableMeta write_table(const std::filesystem::path& dir, const std::string& name, SchemaPtr schema,
                      std::span<const RowBatch> partitions);

}  // namespace edf
