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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "edf/exact_sum.hpp"
#include "edf/row_batch.hpp"
#include "edf/value.hpp"

namespace edf {

enum class AggTag : std::uint8_t { count, sum, avg, var, stddev, min, max, count_distinct, order_stat };

std::string_view to_string(AggTag tag);
AggTag parse_agg_tag(std::string_view text);

struct AggregateKind {
  AggTag tag = AggTag::count;
  double q = 0.5;  ///< quantile for order_stat

  bool operator==(const AggregateKind&) const = default;
};

/// One aggregate of a group-by: kind, input column (unused for count), optional
/// weight column (avg only) and output attribute name.
struct AggSpec {
  AggregateKind kind;
  std::string column;
  std::string weight;
  std::string output;

  /// Default output name: "count", "sum_qty", "q50_price", ...
  static std::string default_output(const AggregateKind& kind, std::string_view column);
};

/// Output kind of an aggregate given its input column kind.
ValueKind output_kind(const AggregateKind& kind, ValueKind input);

// Intrinsic representations. Sums of int64 columns stay in integer arithmetic
// and float sums use ExactSum, so merged sums do not depend on arrival order.
// The remaining fields only feed variance estimates.

struct CountState {
  std::int64_t n = 0;
};

struct SumState {
  std::int64_t isum = 0;
  ExactSum dsum;
  double sum_sq = 0.0;
  double input_var = 0.0;  ///< Σ of upstream cell variances
  bool integral = false;

  double value() const { return integral ? static_cast<double>(isum) : dsum.value(); }
};

/// Σ w·x and Σ w (w = 1 when unweighted) plus second moments of the per-row
/// pairs (a, b) = (w·x, w).
struct AvgState {
  std::int64_t inum = 0;
  ExactSum dnum;
  ExactSum den;
  double sum_aa = 0.0;
  double sum_bb = 0.0;
  double sum_ab = 0.0;
  double var_num = 0.0;  ///< upstream variance carried into Σ a
  double var_den = 0.0;
  double cov_num_den = 0.0;
  bool integral = false;

  double num() const { return integral ? static_cast<double>(inum) : dnum.value(); }
};

/// Count, mean and centered second moment (merged with the parallel rule),
/// plus raw third and fourth power sums for the variance of the estimate.
struct VarState {
  std::int64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  double s3 = 0.0;
  double s4 = 0.0;

  /// Sample variance (n − 1 denominator; 0 for n < 2).
  double sample_variance() const { return n < 2 ? 0.0 : m2 / static_cast<double>(n - 1); }
};

struct ExtremeState {
  std::optional<Value> value;
  bool is_min = true;
  std::vector<double> sample;  ///< kept only when variance tracking is on
};

/// Exact distinct set. Each value records the first unit (delta) it appeared
/// in and how many units contain it, which drives the jackknife variance.
struct DistinctState {
  struct Occurrence {
    std::uint32_t first_unit = 0;
    std::uint32_t units = 0;
  };
  std::unordered_map<Value, Occurrence, ValueHash> values;
  std::uint32_t n_units = 0;
};

struct QuantileState {
  std::vector<Value> values;
  double q = 0.5;
};

using AggState = std::variant<CountState, SumState, AvgState, VarState, ExtremeState, DistinctState, QuantileState>;

/// Aggregate bound to the column positions of an input schema.
struct BoundAgg {
  AggSpec spec;
  std::optional<std::size_t> column;
  std::optional<std::size_t> weight;
  ValueKind input_kind = ValueKind::int64;
  ValueKind weight_kind = ValueKind::int64;
  bool input_has_variance = false;
  bool keep_sample = false;

  static BoundAgg bind(const AggSpec& spec, const EdfSchema& input, bool track_variance);
};

AggState make_state(const BoundAgg& agg);
void update_state(AggState& state, const BoundAgg& agg, const RowBatch& batch, std::size_t row);

/// state ⊕= delta. Throws ValidationError on kind mismatch.
void merge_state(AggState& state, const AggState& delta);

/// Value the aggregate takes over exactly the rows it has seen.
Value raw_value(const AggState& state, const BoundAgg& agg);

/// Raw distinct count, jackknife variance over units.
double distinct_count(const DistinctState& s);
double jackknife_variance(const DistinctState& s);

/// Aggregates of one group.
struct GroupState {
  std::int64_t rows = 0;
  std::vector<AggState> aggs;
};

using AggTable = std::map<Key, GroupState>;

/// Aggregates every row of `batch` into a fresh table, as one unit.
AggTable aggregate_batch(const RowBatch& batch, std::span<const std::size_t> group_cols,
                         std::span<const BoundAgg> aggs);

/// acc ⊕= delta, key-wise.
void merge_tables(AggTable& acc, const AggTable& delta);

/// Single-kind map form: acc ⊕ delta. Throws ValidationError if any state has
/// a kind other than `kind`.
using AggStateMap = std::map<Key, AggState>;
AggStateMap merge_agg(AggStateMap acc, const AggStateMap& delta, const AggregateKind& kind);

bool state_matches(const AggState& s, const AggregateKind& kind);

}  // namespace edf
