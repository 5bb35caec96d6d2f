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
#include <deque>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "edf/agg_state.hpp"
#include "edf/estimators.hpp"
#include "edf/expr.hpp"
#include "edf/growth_model.hpp"
#include "edf/message.hpp"
#include "edf/row_batch.hpp"
#include "edf/state.hpp"

namespace edf {

/// How an operator reacts to new input.
enum class OperatorClass : std::uint8_t {
  order_preserving_local,     ///< op([a, b]) = [op(a), op(b)]
  shuffle_with_inference,     ///< op([a, b]) = op(a) ⊕ op(b), then scaled
  shuffle_without_inference,  ///< recomputed from the whole input
};

std::string_view to_string(OperatorClass c);

struct KeyRules {
  std::vector<std::string> primary_key;
  std::optional<std::vector<std::string>> clustering_key;
};

// ---------------------------------------------------------------------------
// Map / filter

using BatchFn = std::function<RowBatch(const RowBatch&)>;

/// f applied to the concatenation of one or more partials.
RowBatch apply_map(std::span<const RowBatch* const> parts, const BatchFn& f);
RowBatch apply_filter(std::span<const RowBatch* const> parts, const BoundPredicate& predicate);

/// Map and filter keep the input keys.
KeyRules key_rules_local(const EdfSchema& input);

OperatorClass classify_map(const CompiledMap& map, DeltaKind input_mode);
OperatorClass classify_filter(const BoundPredicate& predicate, DeltaKind input_mode);

// ---------------------------------------------------------------------------
// Join

enum class JoinHow : std::uint8_t { inner, left };
enum class JoinMethod : std::uint8_t { automatic, hash, merge };

struct JoinSpec {
  std::vector<std::pair<std::string, std::string>> keys;  ///< (probe column, build column)
  JoinHow how = JoinHow::inner;
  JoinMethod method = JoinMethod::automatic;
};

/// Join bound to its input schemas.
class JoinPlan {
 public:
  JoinPlan(const JoinSpec& spec, SchemaPtr probe, SchemaPtr build);

  const SchemaPtr& output_schema() const { return output_; }
  const JoinSpec& spec() const { return spec_; }
  /// Merge join applies when both inputs are clustered on their join keys.
  bool mergeable() const { return mergeable_; }
  std::span<const std::size_t> probe_keys() const { return probe_keys_; }
  std::span<const std::size_t> build_keys() const { return build_keys_; }
  std::span<const std::size_t> build_payload() const { return build_payload_; }

  /// Output rows for matched (probe row, build row) pairs; build row absent
  /// for unmatched left-join rows.
  RowBatch assemble(const RowBatch& probe, std::span<const std::size_t> probe_rows, const RowBatch* build,
                    std::span<const std::ptrdiff_t> build_rows) const;

 private:
  JoinSpec spec_;
  SchemaPtr probe_;
  SchemaPtr build_;
  SchemaPtr output_;
  std::vector<std::size_t> probe_keys_;
  std::vector<std::size_t> build_keys_;
  std::vector<std::size_t> build_payload_;
  bool mergeable_ = false;
};

/// Probe-side primary key, widened by the build primary key when build join
/// keys do not cover it (one probe row may then match several build rows).
KeyRules key_rules_join(const EdfSchema& probe, const EdfSchema& build, const JoinSpec& spec);

/// Hash table over a completed build side.
class JoinTable {
 public:
  JoinTable(BatchPtr build, std::span<const std::size_t> key_cols);
  const RowBatch& rows() const { return *rows_; }
  std::span<const std::size_t> lookup(const Key& key) const;

 private:
  BatchPtr rows_;
  std::unordered_map<Key, std::vector<std::size_t>, KeyHash> index_;
};

RowBatch hash_join(const RowBatch& probe, const JoinTable& build, const JoinPlan& plan);

/// Streaming merge join of two inputs clustered on the join keys whose
/// partitions arrive in key order. Output is produced once per left partial,
/// after the right side has covered the partial's largest key; right rows at
/// or below the left frontier are discarded afterwards.
class MergeJoiner {
 public:
  explicit MergeJoiner(const JoinPlan& plan);

  /// Throws ValidationError if the partial starts below an earlier one.
  void push_left(BatchPtr batch);
  void push_right(BatchPtr batch);
  void close_right();

  /// Joined output of the oldest pending left partial, if the right side covers it.
  std::optional<RowBatch> pop_ready();
  std::size_t pending_left() const { return left_.size(); }
  std::size_t buffered_right_rows() const;

 private:
  const JoinPlan& plan_;
  std::deque<std::pair<BatchPtr, std::optional<Key>>> left_;  ///< partial, max key
  std::vector<BatchPtr> right_;
  std::optional<Key> left_frontier_;
  std::optional<Key> right_frontier_;
  bool right_closed_ = false;
};

RowBatch merge_join(std::span<const BatchPtr> left, std::span<const BatchPtr> right, const JoinPlan& plan);

// ---------------------------------------------------------------------------
// Aggregation

struct ExtrinsicOptions {
  bool track_variance = false;
  int bootstrap_resamples = 100;
  std::uint64_t seed = 0x5eed;
};

/// Output schema: group attributes (constant) then one attribute per aggregate,
/// mutable unless the aggregation is local.
SchemaPtr agg_output_schema(const EdfSchema& input, const std::vector<std::string>& by,
                            const std::vector<AggSpec>& aggs, bool local);

/// Grouping attributes become the primary key; the clustering key survives
/// only when it is contained in the grouping attributes.
KeyRules key_rules_agg(const EdfSchema& input, const std::vector<std::string>& by);

/// An aggregation is local when its input is appended partials clustered on a
/// subset of the grouping attributes: each group is complete in one partial.
bool agg_is_local(const EdfSchema& input, const std::vector<std::string>& by, DeltaKind input_mode);
OperatorClass classify_agg(bool local);

/// Extrinsic cell for one aggregate of one group at progress t.
EstimateCell to_extrinsic_cell(const AggState& state, const BoundAgg& agg, std::int64_t rows, double t,
                               const PowerFit& fit, const ExtrinsicOptions& options, std::uint64_t group_seed);

/// Intrinsic table to the extrinsic batch. At t == 1 every value is the raw
/// aggregate with zero variance.
RowBatch to_extrinsic(const AggTable& table, std::span<const BoundAgg> aggs, const SchemaPtr& output, double t,
                      const PowerFit& fit, const ExtrinsicOptions& options);

/// Raw aggregates with no scaling (local aggregation, exact answers).
RowBatch to_exact(const AggTable& table, std::span<const BoundAgg> aggs, const SchemaPtr& output);

// ---------------------------------------------------------------------------
// Sort / limit

struct SortKey {
  std::string column;
  bool descending = false;
};

/// Stable sort by `order`, truncated to `limit` rows.
RowBatch sort_limit(const RowBatch& input, std::span<const SortKey> order, std::size_t limit);

// ---------------------------------------------------------------------------
// Streaming operators driven by the executor.

class Operator {
 public:
  virtual ~Operator() = default;

  virtual std::size_t arity() const = 0;
  virtual void consume(std::size_t slot, const Message& msg, const Emit& emit) = 0;
  /// Input `slot` delivered EOF.
  virtual void finish_input(std::size_t /*slot*/, const Emit& /*emit*/) {}
};

class MapOperator final : public Operator {
 public:
  explicit MapOperator(std::shared_ptr<const CompiledMap> map) : map_(std::move(map)) {}
  std::size_t arity() const override { return 1; }
  void consume(std::size_t slot, const Message& msg, const Emit& emit) override;

 private:
  std::shared_ptr<const CompiledMap> map_;
};

class FilterOperator final : public Operator {
 public:
  FilterOperator(BoundPredicate predicate, SchemaPtr schema)
      : predicate_(std::move(predicate)), schema_(std::move(schema)) {}
  std::size_t arity() const override { return 1; }
  void consume(std::size_t slot, const Message& msg, const Emit& emit) override;

 private:
  BoundPredicate predicate_;
  SchemaPtr schema_;
};

/// Slot 0 probes, slot 1 builds. Probe messages are held until build EOF.
class HashJoinOperator final : public Operator {
 public:
  explicit HashJoinOperator(std::shared_ptr<const JoinPlan> plan, SchemaPtr build_schema);
  std::size_t arity() const override { return 2; }
  void consume(std::size_t slot, const Message& msg, const Emit& emit) override;
  void finish_input(std::size_t slot, const Emit& emit) override;

 private:
  void probe(const Message& msg, const Emit& emit) const;

  std::shared_ptr<const JoinPlan> plan_;
  IntrinsicState build_state_;
  std::optional<JoinTable> table_;
  std::vector<Message> pending_;
};

/// Slot 0 is the left (output-driving) input, slot 1 the right.
class MergeJoinOperator final : public Operator {
 public:
  explicit MergeJoinOperator(std::shared_ptr<const JoinPlan> plan);
  std::size_t arity() const override { return 2; }
  void consume(std::size_t slot, const Message& msg, const Emit& emit) override;
  void finish_input(std::size_t slot, const Emit& emit) override;

 private:
  void drain(const Emit& emit);

  std::shared_ptr<const JoinPlan> plan_;
  MergeJoiner joiner_;
  std::deque<Message> left_meta_;
};

class AggregateOperator final : public Operator {
 public:
  AggregateOperator(const EdfSchema& input, std::vector<std::string> by, std::vector<AggSpec> aggs,
                    DeltaKind input_mode, ExtrinsicOptions options);

  std::size_t arity() const override { return 1; }
  void consume(std::size_t slot, const Message& msg, const Emit& emit) override;

  const SchemaPtr& output_schema() const { return output_; }
  bool local() const { return local_; }
  const GrowthModel& growth() const { return growth_; }

 private:
  std::vector<std::size_t> group_cols_;
  std::vector<BoundAgg> aggs_;
  SchemaPtr output_;
  bool local_ = false;
  ExtrinsicOptions options_;
  AggTable acc_;
  GrowthModel growth_;
  std::unordered_set<Key, KeyHash> emitted_;  ///< local mode: groups already emitted
};

class SortLimitOperator final : public Operator {
 public:
  SortLimitOperator(SchemaPtr schema, std::vector<SortKey> order, std::size_t limit);
  std::size_t arity() const override { return 1; }
  void consume(std::size_t slot, const Message& msg, const Emit& emit) override;

 private:
  IntrinsicState input_;
  std::vector<SortKey> order_;
  std::size_t limit_;
};

}  // namespace edf
