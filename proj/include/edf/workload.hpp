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
#include <string>
#include <vector>

#include "edf/executor.hpp"
#include "edf/query_spec.hpp"
#include "edf/row_batch.hpp"

namespace edf {

struct TableData {
  SchemaPtr schema;
  std::vector<RowBatch> partitions;
};

/// A set of generated tables kept in memory.
struct Dataset {
  std::map<std::string, TableData> tables;

  /// In-memory bindings. Unclustered tables are shuffled with `seed`
  /// (0 keeps the natural order).
  Bindings bindings(std::uint64_t seed = 0) const;
  /// Writes `<dir>/<table>/` for every table.
  void write(const std::filesystem::path& dir) const;
};

/// Dataset plus a query over it, with table bindings named after the tables.
struct Workload {
  std::string name;
  Dataset data;
  QuerySpecFile query;
};

/// Rows whose `keep` flag is 1 accumulate as n(t) ~ t^u over progress t and
/// the number of distinct groups among them as m(t) ~ t^v, so the mean group
/// cardinality grows as t^(u − v). Query: filter keep == 1, count and sum(val)
/// by g.
struct MonomialParams {
  double u = 1.0;
  double v = 0.0;
  std::size_t groups = 8;
  std::size_t partitions = 10;
  std::size_t rows = 10000;
  std::uint64_t seed = 1;
};
Workload make_monomial(const MonomialParams& p);

/// Table with group columns c1..c<depth_cols>, each drawing from
/// `branching` values, and an int64 measure x. The depth-d query takes
/// max(x) by (c1..cd) and then sums over one fewer column per level
/// down to a scalar:
///   d = 2: max(x) by (c1, c2) -> sum(max_x) by c1 -> sum(sum_max_x)
struct DeepQueryParams {
  std::size_t depth = 2;
  std::size_t depth_cols = 10;
  std::size_t branching = 4;
  std::size_t rows = 100000;
  std::size_t partitions = 10;
  std::uint64_t seed = 1;
};
Dataset make_deepquery_data(const DeepQueryParams& p);
QueryGraphSpec deep_query(std::size_t depth);
Workload make_deepquery(const DeepQueryParams& p);

/// Students (name, state, score) with an unclustered primary key.
Dataset make_students(std::size_t rows, std::size_t partitions, std::uint64_t seed);

/// Scaled-down order-entry schema: lineitem and orders clustered on orderkey,
/// customer and part unclustered.
Dataset make_orders(std::size_t orders, std::size_t partitions, std::uint64_t seed);

/// Sales with float64 measures and a mutable-free schema.
Dataset make_sales(std::size_t rows, std::size_t partitions, std::uint64_t seed);

/// Unclustered lineitem plus part for the promotion-revenue query.
Dataset make_promo(std::size_t rows, std::size_t parts, std::size_t partitions, std::uint64_t seed);

/// Promotion revenue share: join lineitem with part, weighted average of the
/// promotion flag with revenue as weight.
QueryGraphSpec promo_query();

/// Bundled benchmark queries. Together they use every node kind and every
/// aggregate kind over five datasets.
std::vector<Workload> benchmark_suite(std::uint64_t seed = 7);

}  // namespace edf
