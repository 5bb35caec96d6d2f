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
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "edf/schema.hpp"
#include "edf/value.hpp"

namespace edf {

using Int64Column = std::vector<std::int64_t>;
using Float64Column = std::vector<double>;
using Utf8Column = std::vector<std::string>;
using Column = std::variant<Int64Column, Float64Column, Utf8Column>;

Column make_column(ValueKind kind);
std::size_t column_size(const Column& c);
void push_value(Column& c, const Value& v);

/// Per-column uncertainty companion. Empty vectors mean the column is exact.
struct ColumnUncertainty {
  std::vector<double> variance;
  std::vector<std::uint8_t> unstable;

  bool empty() const { return variance.empty(); }
};

/// Columnar batch of rows conforming to an EdfSchema. Immutable once shared.
class RowBatch {
 public:
  explicit RowBatch(SchemaPtr schema);
  RowBatch(SchemaPtr schema, std::vector<Column> columns,
           std::vector<ColumnUncertainty> uncertainty = {});

  static RowBatch concat(SchemaPtr schema, std::span<const RowBatch* const> parts);

  const SchemaPtr& schema_ptr() const { return schema_; }
  const EdfSchema& schema() const { return *schema_; }
  std::size_t row_count() const { return rows_; }
  bool empty() const { return rows_ == 0; }
  std::size_t column_count() const { return columns_.size(); }

  const Column& column(std::size_t i) const { return columns_.at(i); }
  const Column& column(std::string_view name) const { return columns_.at(schema_->index_of(name)); }
  const std::vector<Column>& columns() const { return columns_; }

  template <class T>
  const std::vector<T>& as(std::size_t i) const {
    return std::get<std::vector<T>>(columns_.at(i));
  }

  Value value(std::size_t col, std::size_t row) const;
  double numeric(std::size_t col, std::size_t row) const;
  Key key(std::size_t row, std::span<const std::size_t> cols) const;
  std::vector<Key> keys(std::span<const std::size_t> cols) const;

  bool has_uncertainty(std::size_t col) const;
  /// Variance of a cell; 0 when the column is exact.
  double variance(std::size_t col, std::size_t row) const;
  bool unstable(std::size_t col, std::size_t row) const;
  const std::vector<ColumnUncertainty>& uncertainty() const { return uncertainty_; }

  /// Rows at the given indices, in order (indices may repeat).
  RowBatch take(std::span<const std::size_t> rows) const;
  /// Same rows with a different schema of identical column kinds.
  RowBatch with_schema(SchemaPtr schema) const;

 private:
  void validate() const;

  SchemaPtr schema_;
  std::vector<Column> columns_;
  std::vector<ColumnUncertainty> uncertainty_;
  std::size_t rows_ = 0;
};

using BatchPtr = std::shared_ptr<const RowBatch>;

/// Row-wise builder used by operators that emit heterogeneous rows.
class BatchBuilder {
 public:
  explicit BatchBuilder(SchemaPtr schema);

  void add_row(std::span<const Value> row);
  void set_variance(std::size_t col, double variance, bool unstable = false);
  std::size_t rows() const { return rows_; }
  RowBatch finish() &&;

 private:
  SchemaPtr schema_;
  std::vector<Column> columns_;
  std::vector<ColumnUncertainty> uncertainty_;
  std::size_t rows_ = 0;
};

}  // namespace edf
