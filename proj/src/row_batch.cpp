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

#include "edf/row_batch.hpp"

#include "edf/error.hpp"

namespace edf {

Column make_column(ValueKind kind) {
  switch (kind) {
    case ValueKind::int64:
      return Int64Column{};
    case ValueKind::float64:
      return Float64Column{};
    case ValueKind::utf8:
      return Utf8Column{};
  }
  return Int64Column{};
}

std::size_t column_size(const Column& c) {
  return std::visit([](const auto& v) { return v.size(); }, c);
}

void push_value(Column& c, const Value& v) {
  if (c.index() != v.index()) {
    throw ValidationError("value of kind " + std::string(to_string(kind_of(v))) + " pushed into " +
                          std::string(to_string(static_cast<ValueKind>(c.index()))) + " column");
  }
  std::visit(
      [&](auto& col) {
        using T = typename std::decay_t<decltype(col)>::value_type;
        col.push_back(std::get<T>(v));
      },
      c);
}

RowBatch::RowBatch(SchemaPtr schema) : schema_(std::move(schema)) {
  columns_.reserve(schema_->size());
  for (const auto& a : schema_->attributes()) columns_.push_back(make_column(a.kind));
  uncertainty_.resize(schema_->size());
}

RowBatch::RowBatch(SchemaPtr schema, std::vector<Column> columns, std::vector<ColumnUncertainty> uncertainty)
    : schema_(std::move(schema)), columns_(std::move(columns)), uncertainty_(std::move(uncertainty)) {
  if (uncertainty_.empty()) uncertainty_.resize(columns_.size());
  rows_ = columns_.empty() ? 0 : column_size(columns_.front());
  validate();
}

void RowBatch::validate() const {
  if (columns_.size() != schema_->size()) {
    throw ValidationError("batch has " + std::to_string(columns_.size()) + " columns, schema " +
                          std::to_string(schema_->size()));
  }
  if (uncertainty_.size() != columns_.size()) throw ValidationError("uncertainty arity mismatch");
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    const auto& attr = schema_->at(i);
    if (static_cast<ValueKind>(columns_[i].index()) != attr.kind) {
      throw ValidationError("column '" + attr.name + "' does not hold " + std::string(to_string(attr.kind)));
    }
    if (column_size(columns_[i]) != rows_) throw ValidationError("column '" + attr.name + "' has wrong length");
    const auto& u = uncertainty_[i];
    if (!u.empty() && (u.variance.size() != rows_ || u.unstable.size() != rows_)) {
      throw ValidationError("uncertainty of '" + attr.name + "' has wrong length");
    }
  }
}

RowBatch RowBatch::concat(SchemaPtr schema, std::span<const RowBatch* const> parts) {
  std::vector<Column> cols;
  std::vector<ColumnUncertainty> unc(schema->size());
  std::size_t total = 0;
  for (const auto* p : parts) total += p->row_count();
  for (std::size_t c = 0; c < schema->size(); ++c) {
    Column col = make_column(schema->at(c).kind);
    std::visit([&](auto& dst) { dst.reserve(total); }, col);
    bool any_unc = false;
    for (const auto* p : parts) {
      if (p->column_count() != schema->size()) throw ValidationError("concat of batches with different arity");
      std::visit(
          [&](auto& dst) {
            using V = std::decay_t<decltype(dst)>;
            const auto* src = std::get_if<V>(&p->column(c));
            if (!src) throw ValidationError("concat of batches with different column kinds");
            dst.insert(dst.end(), src->begin(), src->end());
          },
          col);
      any_unc = any_unc || p->has_uncertainty(c);
    }
    if (any_unc) {
      auto& u = unc[c];
      u.variance.reserve(total);
      u.unstable.reserve(total);
      for (const auto* p : parts) {
        if (p->has_uncertainty(c)) {
          const auto& pu = p->uncertainty()[c];
          u.variance.insert(u.variance.end(), pu.variance.begin(), pu.variance.end());
          u.unstable.insert(u.unstable.end(), pu.unstable.begin(), pu.unstable.end());
        } else {
          u.variance.insert(u.variance.end(), p->row_count(), 0.0);
          u.unstable.insert(u.unstable.end(), p->row_count(), 0);
        }
      }
    }
    cols.push_back(std::move(col));
  }
  return RowBatch(std::move(schema), std::move(cols), std::move(unc));
}

Value RowBatch::value(std::size_t col, std::size_t row) const {
  return std::visit([&](const auto& c) -> Value { return c.at(row); }, columns_.at(col));
}

double RowBatch::numeric(std::size_t col, std::size_t row) const {
  const auto& c = columns_.at(col);
  if (const auto* i = std::get_if<Int64Column>(&c)) return static_cast<double>((*i)[row]);
  if (const auto* d = std::get_if<Float64Column>(&c)) return (*d)[row];
  throw ValidationError("column '" + schema_->at(col).name + "' is not numeric");
}

Key RowBatch::key(std::size_t row, std::span<const std::size_t> cols) const {
  Key k;
  k.reserve(cols.size());
  for (auto c : cols) k.push_back(value(c, row));
  return k;
}

std::vector<Key> RowBatch::keys(std::span<const std::size_t> cols) const {
  std::vector<Key> out;
  out.reserve(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out.push_back(key(r, cols));
  return out;
}

bool RowBatch::has_uncertainty(std::size_t col) const { return !uncertainty_.at(col).empty(); }

double RowBatch::variance(std::size_t col, std::size_t row) const {
  const auto& u = uncertainty_.at(col);
  return u.empty() ? 0.0 : u.variance[row];
}

bool RowBatch::unstable(std::size_t col, std::size_t row) const {
  const auto& u = uncertainty_.at(col);
  return !u.empty() && u.unstable[row] != 0;
}

RowBatch RowBatch::take(std::span<const std::size_t> rows) const {
  std::vector<Column> cols;
  cols.reserve(columns_.size());
  for (const auto& c : columns_) {
    cols.push_back(std::visit(
        [&](const auto& src) -> Column {
          std::decay_t<decltype(src)> dst;
          dst.reserve(rows.size());
          for (auto r : rows) dst.push_back(src[r]);
          return dst;
        },
        c));
  }
  std::vector<ColumnUncertainty> unc(columns_.size());
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    const auto& u = uncertainty_[i];
    if (u.empty()) continue;
    unc[i].variance.reserve(rows.size());
    unc[i].unstable.reserve(rows.size());
    for (auto r : rows) {
      unc[i].variance.push_back(u.variance[r]);
      unc[i].unstable.push_back(u.unstable[r]);
    }
  }
  return RowBatch(schema_, std::move(cols), std::move(unc));
}

RowBatch RowBatch::with_schema(SchemaPtr schema) const { return RowBatch(std::move(schema), columns_, uncertainty_); }

BatchBuilder::BatchBuilder(SchemaPtr schema) : schema_(std::move(schema)) {
  for (const auto& a : schema_->attributes()) columns_.push_back(make_column(a.kind));
  uncertainty_.resize(schema_->size());
}

void BatchBuilder::add_row(std::span<const Value> row) {
  if (row.size() != columns_.size()) throw ValidationError("row arity does not match schema");
  for (std::size_t i = 0; i < row.size(); ++i) push_value(columns_[i], row[i]);
  ++rows_;
  for (auto& u : uncertainty_) {
    if (!u.empty()) {
      u.variance.push_back(0.0);
      u.unstable.push_back(0);
    }
  }
}

void BatchBuilder::set_variance(std::size_t col, double variance, bool unstable) {
  if (rows_ == 0) throw ValidationError("set_variance before any row");
  auto& u = uncertainty_.at(col);
  if (u.empty()) {
    u.variance.assign(rows_, 0.0);
    u.unstable.assign(rows_, 0);
  }
  u.variance.back() = variance;
  u.unstable.back() = unstable ? 1 : 0;
}

RowBatch BatchBuilder::finish() && { return RowBatch(schema_, std::move(columns_), std::move(uncertainty_)); }

}  // namespace edf
