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

#include "edf/agg_state.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "edf/error.hpp"

namespace edf {
namespace {

bool numeric_kind(ValueKind k) { return k != ValueKind::utf8; }

template <class S>
S& expect(AggState& s) {
  auto* p = std::get_if<S>(&s);
  if (!p) throw ValidationError("aggregate state kind mismatch");
  return *p;
}

std::string quantile_name(double q) {
  double pct = q * 100.0;
  if (pct == std::floor(pct)) return std::to_string(static_cast<long long>(pct));
  auto s = to_string(Value(pct));
  std::replace(s.begin(), s.end(), '.', '_');
  return s;
}

}  // namespace

std::string_view to_string(AggTag tag) {
  switch (tag) {
    case AggTag::count:
      return "count";
    case AggTag::sum:
      return "sum";
    case AggTag::avg:
      return "avg";
    case AggTag::var:
      return "var";
    case AggTag::stddev:
      return "stddev";
    case AggTag::min:
      return "min";
    case AggTag::max:
      return "max";
    case AggTag::count_distinct:
      return "count_distinct";
    case AggTag::order_stat:
      return "order_stat";
  }
  return "?";
}

AggTag parse_agg_tag(std::string_view text) {
  for (auto t : {AggTag::count, AggTag::sum, AggTag::avg, AggTag::var, AggTag::stddev, AggTag::min, AggTag::max,
                 AggTag::count_distinct, AggTag::order_stat}) {
    if (to_string(t) == text) return t;
  }
  if (text == "quantile") return AggTag::order_stat;
  throw ValidationError("unknown aggregate '" + std::string(text) + "'");
}

std::string AggSpec::default_output(const AggregateKind& kind, std::string_view column) {
  std::string col(column);
  switch (kind.tag) {
    case AggTag::count:
      return "count";
    case AggTag::count_distinct:
      return "cd_" + col;
    case AggTag::order_stat:
      return "q" + quantile_name(kind.q) + "_" + col;
    default:
      return std::string(to_string(kind.tag)) + "_" + col;
  }
}

ValueKind output_kind(const AggregateKind& kind, ValueKind input) {
  switch (kind.tag) {
    case AggTag::min:
    case AggTag::max:
    case AggTag::order_stat:
      return input;
    default:
      return ValueKind::float64;
  }
}

BoundAgg BoundAgg::bind(const AggSpec& spec, const EdfSchema& input, bool track_variance) {
  BoundAgg b;
  b.spec = spec;
  auto tag = spec.kind.tag;
  if (tag == AggTag::order_stat && !(spec.kind.q >= 0.0 && spec.kind.q <= 1.0)) {
    throw ValidationError("quantile must lie in [0, 1]");
  }
  if (tag != AggTag::count) {
    if (spec.column.empty()) throw ValidationError(std::string(to_string(tag)) + " needs an input column");
    b.column = input.index_of(spec.column);
    const auto& attr = input.at(*b.column);
    b.input_kind = attr.kind;
    b.input_has_variance = attr.is_mutable();
    bool needs_numeric = tag == AggTag::sum || tag == AggTag::avg || tag == AggTag::var || tag == AggTag::stddev;
    if (needs_numeric && !numeric_kind(attr.kind)) {
      throw ValidationError(std::string(to_string(tag)) + " of non-numeric attribute '" + spec.column + "'");
    }
  } else if (!spec.column.empty()) {
    input.index_of(spec.column);
  }
  if (!spec.weight.empty()) {
    if (tag != AggTag::avg) throw ValidationError("only avg takes a weight");
    b.weight = input.index_of(spec.weight);
    b.weight_kind = input.at(*b.weight).kind;
    if (!numeric_kind(b.weight_kind)) throw ValidationError("non-numeric weight '" + spec.weight + "'");
  }
  if (b.spec.output.empty()) b.spec.output = AggSpec::default_output(spec.kind, spec.column);
  b.keep_sample = track_variance && (tag == AggTag::min || tag == AggTag::max) && numeric_kind(b.input_kind);
  return b;
}

AggState make_state(const BoundAgg& agg) {
  switch (agg.spec.kind.tag) {
    case AggTag::count:
      return CountState{};
    case AggTag::sum: {
      SumState s;
      s.integral = agg.input_kind == ValueKind::int64;
      return s;
    }
    case AggTag::avg: {
      AvgState s;
      s.integral = agg.input_kind == ValueKind::int64 && (!agg.weight || agg.weight_kind == ValueKind::int64);
      return s;
    }
    case AggTag::var:
    case AggTag::stddev:
      return VarState{};
    case AggTag::min:
    case AggTag::max: {
      ExtremeState s;
      s.is_min = agg.spec.kind.tag == AggTag::min;
      return s;
    }
    case AggTag::count_distinct:
      return DistinctState{};
    case AggTag::order_stat: {
      QuantileState s;
      s.q = agg.spec.kind.q;
      return s;
    }
  }
  throw ValidationError("unknown aggregate");
}

void update_state(AggState& state, const BoundAgg& agg, const RowBatch& batch, std::size_t row) {
  switch (agg.spec.kind.tag) {
    case AggTag::count:
      ++expect<CountState>(state).n;
      return;
    case AggTag::sum: {
      auto& s = expect<SumState>(state);
      std::size_t c = *agg.column;
      double v;
      if (s.integral) {
        auto iv = batch.as<std::int64_t>(c)[row];
        s.isum += iv;
        v = static_cast<double>(iv);
      } else {
        v = batch.numeric(c, row);
        s.dsum.add(v);
      }
      s.sum_sq += v * v;
      if (agg.input_has_variance) s.input_var += batch.variance(c, row);
      return;
    }
    case AggTag::avg: {
      auto& s = expect<AvgState>(state);
      std::size_t c = *agg.column;
      double x = batch.numeric(c, row);
      double w = agg.weight ? batch.numeric(*agg.weight, row) : 1.0;
      double a = w * x;
      if (s.integral) {
        std::int64_t iw = agg.weight ? batch.as<std::int64_t>(*agg.weight)[row] : 1;
        s.inum += iw * batch.as<std::int64_t>(c)[row];
      } else {
        s.dnum.add(a);
      }
      s.den.add(w);
      s.sum_aa += a * a;
      s.sum_bb += w * w;
      s.sum_ab += a * w;
      double vx = agg.input_has_variance ? batch.variance(c, row) : 0.0;
      double vw = agg.weight ? batch.variance(*agg.weight, row) : 0.0;
      s.var_num += w * w * vx + x * x * vw;
      s.var_den += vw;
      s.cov_num_den += x * vw;
      return;
    }
    case AggTag::var:
    case AggTag::stddev: {
      auto& s = expect<VarState>(state);
      double v = batch.numeric(*agg.column, row);
      ++s.n;
      double d = v - s.mean;
      s.mean += d / static_cast<double>(s.n);
      s.m2 += d * (v - s.mean);
      double v2 = v * v;
      s.s3 += v2 * v;
      s.s4 += v2 * v2;
      return;
    }
    case AggTag::min:
    case AggTag::max: {
      auto& s = expect<ExtremeState>(state);
      Value v = batch.value(*agg.column, row);
      if (!s.value || (s.is_min ? v < *s.value : *s.value < v)) s.value = v;
      if (agg.keep_sample) s.sample.push_back(as_double(v));
      return;
    }
    case AggTag::count_distinct: {
      auto& s = expect<DistinctState>(state);
      if (s.n_units == 0) s.n_units = 1;
      s.values.try_emplace(batch.value(*agg.column, row), DistinctState::Occurrence{s.n_units - 1, 1});
      return;
    }
    case AggTag::order_stat:
      expect<QuantileState>(state).values.push_back(batch.value(*agg.column, row));
      return;
  }
}

void merge_state(AggState& state, const AggState& delta) {
  if (state.index() != delta.index()) throw ValidationError("merge of different aggregate kinds");
  std::visit(
      [&](auto& acc) {
        using S = std::decay_t<decltype(acc)>;
        const auto& d = std::get<S>(delta);
        if constexpr (std::is_same_v<S, CountState>) {
          acc.n += d.n;
        } else if constexpr (std::is_same_v<S, SumState>) {
          if (acc.integral != d.integral) throw ValidationError("merge of integral and float sums");
          acc.isum += d.isum;
          acc.dsum.merge(d.dsum);
          acc.sum_sq += d.sum_sq;
          acc.input_var += d.input_var;
        } else if constexpr (std::is_same_v<S, AvgState>) {
          if (acc.integral != d.integral) throw ValidationError("merge of integral and float averages");
          acc.inum += d.inum;
          acc.dnum.merge(d.dnum);
          acc.den.merge(d.den);
          acc.sum_aa += d.sum_aa;
          acc.sum_bb += d.sum_bb;
          acc.sum_ab += d.sum_ab;
          acc.var_num += d.var_num;
          acc.var_den += d.var_den;
          acc.cov_num_den += d.cov_num_den;
        } else if constexpr (std::is_same_v<S, VarState>) {
          if (d.n == 0) return;
          if (acc.n == 0) {
            acc = d;
            return;
          }
          double na = static_cast<double>(acc.n);
          double nb = static_cast<double>(d.n);
          double n = na + nb;
          double delta_mean = d.mean - acc.mean;
          acc.mean += delta_mean * nb / n;
          acc.m2 += d.m2 + delta_mean * delta_mean * na * nb / n;
          acc.n += d.n;
          acc.s3 += d.s3;
          acc.s4 += d.s4;
        } else if constexpr (std::is_same_v<S, ExtremeState>) {
          if (acc.is_min != d.is_min) throw ValidationError("merge of min with max");
          if (d.value && (!acc.value || (acc.is_min ? *d.value < *acc.value : *acc.value < *d.value))) {
            acc.value = d.value;
          }
          acc.sample.insert(acc.sample.end(), d.sample.begin(), d.sample.end());
        } else if constexpr (std::is_same_v<S, DistinctState>) {
          std::uint32_t offset = acc.n_units;
          for (const auto& [v, o] : d.values) {
            auto [it, inserted] = acc.values.try_emplace(v, DistinctState::Occurrence{o.first_unit + offset, o.units});
            if (!inserted) it->second.units += o.units;
          }
          acc.n_units += d.n_units;
        } else if constexpr (std::is_same_v<S, QuantileState>) {
          if (acc.q != d.q) throw ValidationError("merge of different quantiles");
          acc.values.insert(acc.values.end(), d.values.begin(), d.values.end());
        }
      },
      state);
}

double distinct_count(const DistinctState& s) { return static_cast<double>(s.values.size()); }

double jackknife_variance(const DistinctState& s) {
  if (s.n_units < 2) return 0.0;
  std::vector<double> unique_in(s.n_units, 0.0);
  for (const auto& [v, o] : s.values) {
    if (o.units == 1) unique_in[o.first_unit] += 1.0;
  }
  double d = distinct_count(s);
  double u = static_cast<double>(s.n_units);
  double mean = 0.0;
  for (double c : unique_in) mean += d - c;
  mean /= u;
  double ss = 0.0;
  for (double c : unique_in) ss += (d - c - mean) * (d - c - mean);
  return (u - 1.0) / u * ss;
}

Value raw_value(const AggState& state, const BoundAgg& agg) {
  return std::visit(
      [&](const auto& s) -> Value {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, CountState>) {
          return static_cast<double>(s.n);
        } else if constexpr (std::is_same_v<S, SumState>) {
          return s.value();
        } else if constexpr (std::is_same_v<S, AvgState>) {
          double den = s.den.value();
          if (den == 0.0) throw DomainError("average over zero total weight");
          return s.num() / den;
        } else if constexpr (std::is_same_v<S, VarState>) {
          double v = s.sample_variance();
          return agg.spec.kind.tag == AggTag::stddev ? std::sqrt(v) : v;
        } else if constexpr (std::is_same_v<S, ExtremeState>) {
          if (!s.value) throw EmptyStateError("extreme of an empty group");
          return *s.value;
        } else if constexpr (std::is_same_v<S, DistinctState>) {
          return distinct_count(s);
        } else {
          if (s.values.empty()) throw EmptyStateError("quantile of an empty group");
          auto values = s.values;
          auto pos = static_cast<std::size_t>(std::floor(s.q * static_cast<double>(values.size() - 1)));
          std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(pos), values.end());
          return values[pos];
        }
      },
      state);
}

AggTable aggregate_batch(const RowBatch& batch, std::span<const std::size_t> group_cols,
                         std::span<const BoundAgg> aggs) {
  std::unordered_map<Key, GroupState, KeyHash> groups;
  for (std::size_t r = 0; r < batch.row_count(); ++r) {
    auto [it, inserted] = groups.try_emplace(batch.key(r, group_cols));
    auto& g = it->second;
    if (inserted) {
      g.aggs.reserve(aggs.size());
      for (const auto& a : aggs) g.aggs.push_back(make_state(a));
    }
    ++g.rows;
    for (std::size_t i = 0; i < aggs.size(); ++i) update_state(g.aggs[i], aggs[i], batch, r);
  }
  AggTable out;
  for (auto& [k, g] : groups) out.emplace(k, std::move(g));
  return out;
}

void merge_tables(AggTable& acc, const AggTable& delta) {
  for (const auto& [k, g] : delta) {
    auto it = acc.find(k);
    if (it == acc.end()) {
      acc.emplace(k, g);
      continue;
    }
    auto& dst = it->second;
    if (dst.aggs.size() != g.aggs.size()) throw ValidationError("merge of tables with different aggregates");
    dst.rows += g.rows;
    for (std::size_t i = 0; i < g.aggs.size(); ++i) merge_state(dst.aggs[i], g.aggs[i]);
  }
}

bool state_matches(const AggState& s, const AggregateKind& kind) {
  switch (kind.tag) {
    case AggTag::count:
      return std::holds_alternative<CountState>(s);
    case AggTag::sum:
      return std::holds_alternative<SumState>(s);
    case AggTag::avg:
      return std::holds_alternative<AvgState>(s);
    case AggTag::var:
    case AggTag::stddev:
      return std::holds_alternative<VarState>(s);
    case AggTag::min:
    case AggTag::max: {
      const auto* e = std::get_if<ExtremeState>(&s);
      return e && e->is_min == (kind.tag == AggTag::min);
    }
    case AggTag::count_distinct:
      return std::holds_alternative<DistinctState>(s);
    case AggTag::order_stat: {
      const auto* q = std::get_if<QuantileState>(&s);
      return q && q->q == kind.q;
    }
  }
  return false;
}

AggStateMap merge_agg(AggStateMap acc, const AggStateMap& delta, const AggregateKind& kind) {
  for (const auto& [k, s] : acc) {
    if (!state_matches(s, kind)) throw ValidationError("accumulator state does not match " + std::string(to_string(kind.tag)));
  }
  for (const auto& [k, s] : delta) {
    if (!state_matches(s, kind)) throw ValidationError("delta state does not match " + std::string(to_string(kind.tag)));
    auto it = acc.find(k);
    if (it == acc.end()) {
      acc.emplace(k, s);
    } else {
      merge_state(it->second, s);
    }
  }
  return acc;
}

}  // namespace edf
