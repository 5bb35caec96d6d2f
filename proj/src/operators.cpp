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

#include "edf/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "edf/confidence.hpp"
#include "edf/error.hpp"

namespace edf {
namespace {

RowBatch concat_parts(std::span<const RowBatch* const> parts) {
  if (parts.empty()) throw ValidationError("operator applied to no partials");
  return RowBatch::concat(parts.front()->schema_ptr(), parts);
}

bool is_subset(const std::vector<std::string>& small, const std::vector<std::string>& big) {
  return std::all_of(small.begin(), small.end(),
                     [&](const std::string& s) { return std::find(big.begin(), big.end(), s) != big.end(); });
}

Value default_value(ValueKind k) {
  switch (k) {
    case ValueKind::int64:
      return std::int64_t{0};
    case ValueKind::float64:
      return 0.0;
    case ValueKind::utf8:
      return std::string();
  }
  return std::int64_t{0};
}

std::pair<Key, Key> key_range(const RowBatch& b, std::span<const std::size_t> cols) {
  Key lo = b.key(0, cols);
  Key hi = lo;
  for (std::size_t r = 1; r < b.row_count(); ++r) {
    Key k = b.key(r, cols);
    if (k < lo) lo = k;
    if (hi < k) hi = std::move(k);
  }
  return {std::move(lo), std::move(hi)};
}

}  // namespace

std::string_view to_string(OperatorClass c) {
  switch (c) {
    case OperatorClass::order_preserving_local:
      return "order_preserving_local";
    case OperatorClass::shuffle_with_inference:
      return "shuffle_with_inference";
    case OperatorClass::shuffle_without_inference:
      return "shuffle_without_inference";
  }
  return "?";
}

RowBatch apply_map(std::span<const RowBatch* const> parts, const BatchFn& f) { return f(concat_parts(parts)); }

RowBatch apply_filter(std::span<const RowBatch* const> parts, const BoundPredicate& predicate) {
  auto all = concat_parts(parts);
  std::vector<std::size_t> keep;
  for (std::size_t r = 0; r < all.row_count(); ++r) {
    if (predicate(all, r)) keep.push_back(r);
  }
  if (keep.size() == all.row_count()) return all;
  return all.take(keep);
}

KeyRules key_rules_local(const EdfSchema& input) { return {input.primary_key(), input.clustering_key()}; }

OperatorClass classify_map(const CompiledMap& /*map*/, DeltaKind input_mode) {
  return input_mode == DeltaKind::replace ? OperatorClass::shuffle_without_inference
                                          : OperatorClass::order_preserving_local;
}

OperatorClass classify_filter(const BoundPredicate& predicate, DeltaKind input_mode) {
  // A predicate over estimates can flip as they refine, so such input is
  // filtered again in full.
  return input_mode == DeltaKind::replace || predicate.references_mutable() ? OperatorClass::shuffle_without_inference
                                                                            : OperatorClass::order_preserving_local;
}

// ---------------------------------------------------------------------------
// Join

JoinPlan::JoinPlan(const JoinSpec& spec, SchemaPtr probe, SchemaPtr build)
    : spec_(spec), probe_(std::move(probe)), build_(std::move(build)) {
  if (spec_.keys.empty()) throw ValidationError("join without keys");
  std::vector<std::string> probe_names;
  std::vector<std::string> build_names;
  for (const auto& [p, b] : spec_.keys) {
    auto pi = probe_->index_of(p);
    auto bi = build_->index_of(b);
    if (probe_->at(pi).kind != build_->at(bi).kind) {
      throw ValidationError("join key kinds differ: '" + p + "' vs '" + b + "'");
    }
    probe_keys_.push_back(pi);
    build_keys_.push_back(bi);
    probe_names.push_back(p);
    build_names.push_back(b);
  }
  std::vector<AttributeDef> out = probe_->attributes();
  std::unordered_set<std::string> names;
  for (const auto& a : out) names.insert(a.name);
  for (std::size_t i = 0; i < build_->size(); ++i) {
    if (std::find(build_keys_.begin(), build_keys_.end(), i) != build_keys_.end()) continue;
    AttributeDef a = build_->at(i);
    if (!names.insert(a.name).second) throw ValidationError("join output would repeat attribute '" + a.name + "'");
    a.mutability = Mutability::constant;
    build_payload_.push_back(i);
    out.push_back(std::move(a));
  }
  if (spec_.how == JoinHow::left) {
    if (!names.insert("_matched").second) throw ValidationError("join output would repeat attribute '_matched'");
    out.push_back({"_matched", ValueKind::int64, Mutability::constant});
  }
  auto rules = key_rules_join(*probe_, *build_, spec_);
  output_ = make_schema(EdfSchema(std::move(out), rules.primary_key, rules.clustering_key));
  mergeable_ = probe_->clustering_key() == std::optional(probe_names) &&
               build_->clustering_key() == std::optional(build_names);
}

RowBatch JoinPlan::assemble(const RowBatch& probe, std::span<const std::size_t> probe_rows, const RowBatch* build,
                            std::span<const std::ptrdiff_t> build_rows) const {
  if (probe_rows.size() != build_rows.size()) throw ValidationError("assemble: row lists differ in length");
  auto left = probe.take(probe_rows);
  std::vector<Column> cols(left.columns().begin(), left.columns().end());
  std::vector<ColumnUncertainty> unc(left.uncertainty().begin(), left.uncertainty().end());
  for (auto bc : build_payload_) {
    auto kind = build_->at(bc).kind;
    Column col = make_column(kind);
    std::visit(
        [&](auto& dst) {
          using V = std::decay_t<decltype(dst)>;
          dst.reserve(build_rows.size());
          const V* src = build ? &std::get<V>(build->column(bc)) : nullptr;
          for (auto r : build_rows) {
            if (r < 0) {
              dst.push_back(std::get<typename V::value_type>(default_value(kind)));
            } else {
              dst.push_back((*src)[static_cast<std::size_t>(r)]);
            }
          }
        },
        col);
    cols.push_back(std::move(col));
    unc.emplace_back();
  }
  if (spec_.how == JoinHow::left) {
    Int64Column matched;
    matched.reserve(build_rows.size());
    for (auto r : build_rows) matched.push_back(r < 0 ? 0 : 1);
    cols.emplace_back(std::move(matched));
    unc.emplace_back();
  }
  return RowBatch(output_, std::move(cols), std::move(unc));
}

KeyRules key_rules_join(const EdfSchema& probe, const EdfSchema& build, const JoinSpec& spec) {
  KeyRules r{probe.primary_key(), probe.clustering_key()};
  std::vector<std::string> build_join;
  for (const auto& kv : spec.keys) build_join.push_back(kv.second);
  for (const auto& k : build.primary_key()) {
    if (std::find(build_join.begin(), build_join.end(), k) == build_join.end()) r.primary_key.push_back(k);
  }
  return r;
}

JoinTable::JoinTable(BatchPtr build, std::span<const std::size_t> key_cols) : rows_(std::move(build)) {
  index_.reserve(rows_->row_count());
  for (std::size_t r = 0; r < rows_->row_count(); ++r) index_[rows_->key(r, key_cols)].push_back(r);
}

std::span<const std::size_t> JoinTable::lookup(const Key& key) const {
  auto it = index_.find(key);
  if (it == index_.end()) return {};
  return it->second;
}

RowBatch hash_join(const RowBatch& probe, const JoinTable& build, const JoinPlan& plan) {
  std::vector<std::size_t> probe_rows;
  std::vector<std::ptrdiff_t> build_rows;
  const bool left = plan.spec().how == JoinHow::left;
  for (std::size_t r = 0; r < probe.row_count(); ++r) {
    auto matches = build.lookup(probe.key(r, plan.probe_keys()));
    if (matches.empty() && left) {
      probe_rows.push_back(r);
      build_rows.push_back(-1);
    }
    for (auto m : matches) {
      probe_rows.push_back(r);
      build_rows.push_back(static_cast<std::ptrdiff_t>(m));
    }
  }
  return plan.assemble(probe, probe_rows, &build.rows(), build_rows);
}

MergeJoiner::MergeJoiner(const JoinPlan& plan) : plan_(plan) {}

void MergeJoiner::push_left(BatchPtr batch) {
  std::optional<Key> max;
  if (!batch->empty()) {
    auto [lo, hi] = key_range(*batch, plan_.probe_keys());
    if (left_frontier_ && !(*left_frontier_ < lo)) {
      throw ValidationError("merge join: left partition out of key order");
    }
    left_frontier_ = hi;
    max = std::move(hi);
  }
  left_.emplace_back(std::move(batch), std::move(max));
}

void MergeJoiner::push_right(BatchPtr batch) {
  if (right_closed_) throw ValidationError("merge join: right input already closed");
  if (batch->empty()) return;
  auto [lo, hi] = key_range(*batch, plan_.build_keys());
  if (right_frontier_ && !(*right_frontier_ < lo)) {
    throw ValidationError("merge join: right partition out of key order");
  }
  right_frontier_ = std::move(hi);
  right_.push_back(std::move(batch));
}

void MergeJoiner::close_right() { right_closed_ = true; }

std::optional<RowBatch> MergeJoiner::pop_ready() {
  if (left_.empty()) return std::nullopt;
  auto& [batch, max] = left_.front();
  bool ready = !max || right_closed_ || (right_frontier_ && !(*right_frontier_ < *max));
  if (!ready) return std::nullopt;

  BatchPtr right;
  if (right_.size() == 1) {
    right = right_.front();
  } else {
    std::vector<const RowBatch*> parts;
    for (const auto& r : right_) parts.push_back(r.get());
    SchemaPtr schema = right_.empty() ? nullptr : right_.front()->schema_ptr();
    if (schema) right = std::make_shared<const RowBatch>(RowBatch::concat(schema, parts));
  }
  RowBatch out = [&] {
    if (right) return hash_join(*batch, JoinTable(right, plan_.build_keys()), plan_);
    std::vector<std::size_t> probe_rows;
    std::vector<std::ptrdiff_t> build_rows;
    if (plan_.spec().how == JoinHow::left) {
      for (std::size_t r = 0; r < batch->row_count(); ++r) {
        probe_rows.push_back(r);
        build_rows.push_back(-1);
      }
    }
    return plan_.assemble(*batch, probe_rows, nullptr, build_rows);
  }();

  // Later left partitions start above this one's largest key.
  right_.clear();
  if (right && max) {
    std::vector<std::size_t> keep;
    for (std::size_t r = 0; r < right->row_count(); ++r) {
      if (*max < right->key(r, plan_.build_keys())) keep.push_back(r);
    }
    if (!keep.empty()) {
      right_.push_back(keep.size() == right->row_count() ? right
                                                         : std::make_shared<const RowBatch>(right->take(keep)));
    }
  } else if (right) {
    right_.push_back(right);
  }
  left_.pop_front();
  return out;
}

std::size_t MergeJoiner::buffered_right_rows() const {
  std::size_t n = 0;
  for (const auto& r : right_) n += r->row_count();
  return n;
}

RowBatch merge_join(std::span<const BatchPtr> left, std::span<const BatchPtr> right, const JoinPlan& plan) {
  MergeJoiner j(plan);
  for (const auto& r : right) j.push_right(r);
  j.close_right();
  std::vector<RowBatch> outs;
  for (const auto& l : left) {
    j.push_left(l);
    while (auto o = j.pop_ready()) outs.push_back(std::move(*o));
  }
  std::vector<const RowBatch*> parts;
  for (const auto& o : outs) parts.push_back(&o);
  if (parts.empty()) return RowBatch(plan.output_schema());
  return RowBatch::concat(plan.output_schema(), parts);
}

// ---------------------------------------------------------------------------
// Aggregation

KeyRules key_rules_agg(const EdfSchema& input, const std::vector<std::string>& by) {
  KeyRules r{by, std::nullopt};
  const auto& ck = input.clustering_key();
  if (ck && is_subset(*ck, by)) r.clustering_key = ck;
  return r;
}

bool agg_is_local(const EdfSchema& input, const std::vector<std::string>& by, DeltaKind input_mode) {
  const auto& ck = input.clustering_key();
  return input_mode == DeltaKind::append && ck && is_subset(*ck, by);
}

OperatorClass classify_agg(bool local) {
  return local ? OperatorClass::order_preserving_local : OperatorClass::shuffle_with_inference;
}

SchemaPtr agg_output_schema(const EdfSchema& input, const std::vector<std::string>& by,
                            const std::vector<AggSpec>& aggs, bool local) {
  std::vector<AttributeDef> attrs;
  for (const auto& g : by) {
    AttributeDef a = input.at(input.index_of(g));
    a.mutability = Mutability::constant;
    attrs.push_back(std::move(a));
  }
  for (const auto& spec : aggs) {
    auto b = BoundAgg::bind(spec, input, false);
    attrs.push_back({b.spec.output, output_kind(spec.kind, b.input_kind),
                     local ? Mutability::constant : Mutability::mutable_});
  }
  auto rules = key_rules_agg(input, by);
  if (!local) rules.clustering_key.reset();
  return make_schema(EdfSchema(std::move(attrs), rules.primary_key, rules.clustering_key));
}

EstimateCell to_extrinsic_cell(const AggState& state, const BoundAgg& agg, std::int64_t rows, double t,
                               const PowerFit& fit, const ExtrinsicOptions& options, std::uint64_t group_seed) {
  if (is_final(t)) return {raw_value(state, agg), 0.0};
  const double x = static_cast<double>(rows);
  const bool track = options.track_variance;
  auto card = estimate_final_cardinality({x, t}, fit.w, fit.var_w);
  const double fpc = card.xhat > 0.0 ? std::max(0.0, 1.0 - x / card.xhat) : 0.0;

  return std::visit(
      [&](const auto& s) -> EstimateCell {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, CountState>) {
          auto c = estimate_count(card);
          if (!track) c.variance = 0.0;
          return c;
        } else if constexpr (std::is_same_v<S, SumState>) {
          double y = s.value();
          double var_y = 0.0;
          if (track && x > 1.0) {
            double s2 = std::max(0.0, (s.sum_sq - y * y / x) / (x - 1.0));
            var_y = x * s2 * fpc + s.input_var;
          } else if (track) {
            var_y = s.input_var;
          }
          auto c = estimate_sum(y, x, track ? card : CardinalityEstimate{card.xhat, 0.0}, var_y);
          return c;
        } else if constexpr (std::is_same_v<S, AvgState>) {
          Cov2 cov{};
          double num = s.num();
          double den = s.den.value();
          if (track) {
            if (x > 1.0) {
              double saa = std::max(0.0, (s.sum_aa - num * num / x) / (x - 1.0));
              double sbb = std::max(0.0, (s.sum_bb - den * den / x) / (x - 1.0));
              double sab = (s.sum_ab - num * den / x) / (x - 1.0);
              cov[0][0] = x * saa * fpc;
              cov[1][1] = x * sbb * fpc;
              cov[0][1] = cov[1][0] = x * sab * fpc;
            }
            cov[0][0] += s.var_num;
            cov[1][1] += s.var_den;
            cov[0][1] += s.cov_num_den;
            cov[1][0] += s.cov_num_den;
          }
          return estimate_weighted_avg(num, den, x, card, cov);
        } else if constexpr (std::is_same_v<S, VarState>) {
          double s2 = s.sample_variance();
          double var_s2 = 0.0;
          if (track && s.n > 1) {
            double n = static_cast<double>(s.n);
            double m = s.mean;
            double sum2 = s.m2 + n * m * m;
            double mu4 = (s.s4 - 4.0 * m * s.s3 + 6.0 * m * m * sum2 - 3.0 * n * m * m * m * m) / n;
            var_s2 = std::max(0.0, (mu4 - s2 * s2) / n * fpc);
          }
          if (agg.spec.kind.tag == AggTag::stddev) {
            double sd = std::sqrt(s2);
            return {sd, s2 > 0.0 ? var_s2 / (4.0 * s2) : 0.0};
          }
          return {s2, var_s2};
        } else if constexpr (std::is_same_v<S, ExtremeState>) {
          double var = 0.0;
          if (track && s.sample.size() >= 2 && options.bootstrap_resamples >= 100) {
            std::mt19937_64 rng(group_seed);
            var = initial_variance_order_stat(s.sample, s.is_min ? 0.0 : 1.0, options.bootstrap_resamples, rng);
          }
          return estimate_order_stat(raw_value(state, agg), var);
        } else if constexpr (std::is_same_v<S, DistinctState>) {
          double y = distinct_count(s);
          double var_y = track ? jackknife_variance(s) : 0.0;
          auto c = estimate_count_distinct(y, x, track ? card : CardinalityEstimate{card.xhat, 0.0}, var_y);
          return c;
        } else {
          double var = 0.0;
          if (track && s.values.size() >= 2 && options.bootstrap_resamples >= 100 &&
              agg.input_kind != ValueKind::utf8) {
            std::vector<double> sample;
            sample.reserve(s.values.size());
            for (const auto& v : s.values) sample.push_back(as_double(v));
            std::mt19937_64 rng(group_seed);
            var = initial_variance_order_stat(sample, s.q, options.bootstrap_resamples, rng);
          }
          return estimate_order_stat(raw_value(state, agg), var);
        }
      },
      state);
}

RowBatch to_extrinsic(const AggTable& table, std::span<const BoundAgg> aggs, const SchemaPtr& output, double t,
                      const PowerFit& fit, const ExtrinsicOptions& options) {
  BatchBuilder bb(output);
  std::vector<Value> row;
  const std::size_t key_width = output->size() - aggs.size();
  for (const auto& [key, g] : table) {
    row.assign(key.begin(), key.end());
    std::vector<double> vars;
    std::uint64_t seed = options.seed ^ static_cast<std::uint64_t>(KeyHash{}(key));
    for (std::size_t i = 0; i < aggs.size(); ++i) {
      auto cell = to_extrinsic_cell(g.aggs[i], aggs[i], g.rows, t, fit, options, seed + i);
      row.push_back(std::move(cell.value));
      vars.push_back(cell.variance);
    }
    bb.add_row(row);
    if (options.track_variance) {
      for (std::size_t i = 0; i < aggs.size(); ++i) {
        if (vars[i] != 0.0) bb.set_variance(key_width + i, vars[i], std::isnan(vars[i]));
      }
    }
  }
  return std::move(bb).finish();
}

RowBatch to_exact(const AggTable& table, std::span<const BoundAgg> aggs, const SchemaPtr& output) {
  BatchBuilder bb(output);
  std::vector<Value> row;
  for (const auto& [key, g] : table) {
    row.assign(key.begin(), key.end());
    for (std::size_t i = 0; i < aggs.size(); ++i) row.push_back(raw_value(g.aggs[i], aggs[i]));
    bb.add_row(row);
  }
  return std::move(bb).finish();
}

// ---------------------------------------------------------------------------
// Sort / limit

RowBatch sort_limit(const RowBatch& input, std::span<const SortKey> order, std::size_t limit) {
  std::vector<std::size_t> cols;
  for (const auto& k : order) cols.push_back(input.schema().index_of(k.column));
  std::vector<std::size_t> idx(input.row_count());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      Value va = input.value(cols[i], a);
      Value vb = input.value(cols[i], b);
      if (va == vb) continue;
      return order[i].descending ? vb < va : va < vb;
    }
    return false;
  });
  if (idx.size() > limit) idx.resize(limit);
  return input.take(idx);
}

// ---------------------------------------------------------------------------
// Streaming operators

void MapOperator::consume(std::size_t /*slot*/, const Message& msg, const Emit& emit) {
  auto out = std::make_shared<const RowBatch>((*map_)(*msg.batch));
  emit({msg.kind, std::move(out), msg.progress, msg.partition});
}

void FilterOperator::consume(std::size_t /*slot*/, const Message& msg, const Emit& emit) {
  const RowBatch* parts[] = {msg.batch.get()};
  auto out = std::make_shared<const RowBatch>(apply_filter(parts, predicate_));
  emit({msg.kind, std::move(out), msg.progress, msg.partition});
}

HashJoinOperator::HashJoinOperator(std::shared_ptr<const JoinPlan> plan, SchemaPtr build_schema)
    : plan_(std::move(plan)), build_state_(std::move(build_schema)) {}

void HashJoinOperator::consume(std::size_t slot, const Message& msg, const Emit& emit) {
  if (slot == 1) {
    if (table_) throw ExecutionError("hash join: build input after EOF");
    if (msg.kind == Message::Kind::replace) {
      Version v;
      v.partials.push_back(Partial::from_batch(msg.batch));
      build_state_.push_version(std::move(v));
    } else {
      build_state_.append_partial(Partial::from_batch(msg.batch));
    }
    return;
  }
  if (table_) {
    probe(msg, emit);
  } else {
    pending_.push_back(msg);
  }
}

void HashJoinOperator::finish_input(std::size_t slot, const Emit& emit) {
  if (slot != 1) return;
  auto rows = std::make_shared<const RowBatch>(build_state_.has_version() ? build_state_.latest_state()
                                                                         : RowBatch(build_state_.schema_ptr()));
  table_.emplace(std::move(rows), plan_->build_keys());
  for (const auto& m : pending_) probe(m, emit);
  pending_.clear();
}

void HashJoinOperator::probe(const Message& msg, const Emit& emit) const {
  auto out = std::make_shared<const RowBatch>(hash_join(*msg.batch, *table_, *plan_));
  emit({msg.kind, std::move(out), msg.progress, msg.partition});
}

MergeJoinOperator::MergeJoinOperator(std::shared_ptr<const JoinPlan> plan)
    : plan_(std::move(plan)), joiner_(*plan_) {}

void MergeJoinOperator::consume(std::size_t slot, const Message& msg, const Emit& emit) {
  if (msg.kind != Message::Kind::append) throw ExecutionError("merge join needs appended partials");
  if (slot == 0) {
    joiner_.push_left(msg.batch);
    left_meta_.push_back({msg.kind, nullptr, msg.progress, msg.partition});
  } else {
    joiner_.push_right(msg.batch);
  }
  drain(emit);
}

void MergeJoinOperator::finish_input(std::size_t slot, const Emit& emit) {
  if (slot == 1) joiner_.close_right();
  drain(emit);
}

void MergeJoinOperator::drain(const Emit& emit) {
  while (auto out = joiner_.pop_ready()) {
    auto meta = left_meta_.front();
    left_meta_.pop_front();
    emit({Message::Kind::append, std::make_shared<const RowBatch>(std::move(*out)), meta.progress, meta.partition});
  }
}

AggregateOperator::AggregateOperator(const EdfSchema& input, std::vector<std::string> by, std::vector<AggSpec> aggs,
                                     DeltaKind input_mode, ExtrinsicOptions options)
    : group_cols_(input.indices_of(by)), options_(options) {
  for (const auto& a : aggs) aggs_.push_back(BoundAgg::bind(a, input, options.track_variance));
  local_ = agg_is_local(input, by, input_mode);
  output_ = agg_output_schema(input, by, aggs, local_);
}

void AggregateOperator::consume(std::size_t /*slot*/, const Message& msg, const Emit& emit) {
  auto delta = aggregate_batch(*msg.batch, group_cols_, aggs_);
  if (local_) {
    for (const auto& [k, g] : delta) {
      if (!emitted_.insert(k).second) {
        throw ExecutionError("group spans two partitions of a clustered input");
      }
    }
    auto out = std::make_shared<const RowBatch>(to_exact(delta, aggs_, output_));
    emit({Message::Kind::append, std::move(out), msg.progress, msg.partition});
    return;
  }
  if (msg.kind == Message::Kind::replace) {
    acc_ = std::move(delta);
  } else {
    merge_tables(acc_, delta);
  }
  const double t = msg.progress.t();
  if (!acc_.empty() && t > 0.0) {
    std::int64_t rows = 0;
    for (const auto& [k, g] : acc_) rows += g.rows;
    growth_.observe(t, static_cast<double>(rows) / static_cast<double>(acc_.size()));
  }
  auto out = std::make_shared<const RowBatch>(to_extrinsic(acc_, aggs_, output_, t, growth_.fit_power(), options_));
  emit({Message::Kind::replace, std::move(out), msg.progress, msg.partition});
}

SortLimitOperator::SortLimitOperator(SchemaPtr schema, std::vector<SortKey> order, std::size_t limit)
    : input_(std::move(schema)), order_(std::move(order)), limit_(limit) {
  for (const auto& k : order_) input_.schema().index_of(k.column);
}

void SortLimitOperator::consume(std::size_t /*slot*/, const Message& msg, const Emit& emit) {
  if (msg.kind == Message::Kind::replace) {
    Version v;
    v.partials.push_back(Partial::from_batch(msg.batch));
    input_.push_version(std::move(v));
  } else {
    input_.append_partial(Partial::from_batch(msg.batch));
  }
  auto out = std::make_shared<const RowBatch>(sort_limit(input_.latest_state(), order_, limit_));
  emit({Message::Kind::replace, std::move(out), msg.progress, msg.partition});
}

}  // namespace edf
