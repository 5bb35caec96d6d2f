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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "edf/row_batch.hpp"
#include "edf/schema.hpp"
#include "edf/value.hpp"

namespace edf {

enum class CompareOp : std::uint8_t { eq, ne, lt, le, gt, ge, starts_with };

std::string_view to_string(CompareOp op);
CompareOp parse_compare_op(std::string_view text);

/// column <op> literal
struct Comparison {
  std::string column;
  CompareOp op = CompareOp::eq;
  Value literal;
};

/// Conjunction of comparisons. An empty predicate accepts every row.
struct Predicate {
  std::vector<Comparison> terms;

  static Predicate always_true() { return {}; }
  std::vector<std::string> columns() const;
};

/// Predicate bound to a schema.
class BoundPredicate {
 public:
  BoundPredicate(const Predicate& p, const EdfSchema& schema);
  bool operator()(const RowBatch& batch, std::size_t row) const;
  bool references_mutable() const { return references_mutable_; }

 private:
  struct Term {
    std::size_t column;
    CompareOp op;
    Value literal;
  };
  std::vector<Term> terms_;
  bool references_mutable_ = false;
};

/// Argument of a built-in map function: a column, a number or a string.
struct ExprArg {
  enum class Kind : std::uint8_t { column, number, text };
  Kind kind = Kind::column;
  std::string name;  ///< column name or text literal
  double number = 0.0;

  static ExprArg col(std::string n) { return {Kind::column, std::move(n), 0.0}; }
  static ExprArg num(double v) { return {Kind::number, {}, v}; }
  static ExprArg str(std::string s) { return {Kind::text, std::move(s), 0.0}; }
};

/// `output = fn(args...)`. Functions: col, add, sub, mul, div, mul_one_minus,
/// neg, abs, square, sqrt, if_prefix(text_col, "prefix", x).
struct MapExpr {
  std::string output;
  std::string fn;
  std::vector<ExprArg> args;
};

/// Projection plus derived columns.
struct MapSpec {
  std::optional<std::vector<std::string>> keep;  ///< nullopt keeps every input column
  std::vector<MapExpr> exprs;
};

/// Map spec bound to an input schema; produces the output schema and rows.
/// Expressions are evaluated in order and may reference the outputs of
/// earlier expressions. Arithmetic on int64 columns and integral literals
/// stays int64; div, sqrt and mul_one_minus produce float64.
class CompiledMap {
 public:
  CompiledMap(const MapSpec& spec, const EdfSchema& input);

  const SchemaPtr& output_schema() const { return output_; }
  bool references_mutable() const { return references_mutable_; }

  /// Applies the projection and expressions. Variances of mutable inputs are
  /// propagated through a finite-difference Jacobian.
  RowBatch operator()(const RowBatch& input) const;

 private:
  struct BoundArg {
    ExprArg::Kind kind = ExprArg::Kind::number;
    std::size_t column = 0;  ///< index into input columns followed by expression outputs
    double number = 0.0;
    std::string text;
    bool integral = false;
    bool is_mutable = false;
  };
  struct BoundExpr {
    std::string fn;
    std::vector<BoundArg> args;
    ValueKind kind = ValueKind::float64;
    bool is_mutable = false;
  };

  std::size_t input_width_ = 0;
  std::vector<std::size_t> keep_;
  std::vector<BoundExpr> exprs_;
  SchemaPtr output_;
  bool references_mutable_ = false;
};

}  // namespace edf
