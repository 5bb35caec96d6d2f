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

#include "edf/batch_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "edf/error.hpp"

namespace edf {
namespace {

// Direct evaluation of each node over its complete input. Aggregates are
// computed from each group's row list without any incremental state.

RowBatch read_all(const GraphNode& node, const Bindings& bindings) {
  const auto& table = std::get<ReadParams>(node.spec.params).table;
  auto it = bindings.sources.find(table);
  if (it == bindings.sources.end()) throw ValidationError("table '" + table + "' is not bound");
  const auto& src = *it->second;
  std::vector<BatchPtr> parts;
  for (std::size_t i = 0; i < src.meta().partitions.size(); ++i) parts.push_back(src.load(i));
  std::vector<const RowBatch*> raw;
  for (const auto& p : parts) raw.push_back(p.get());
  return RowBatch::concat(node.schema, raw);
}

double numeric_value(const Value& v) {
  return kind_of(v) == ValueKind::int64 ? static_cast<double>(std::get<std::int64_t>(v)) : std::get<double>(v);
}

Value aggregate_rows(const RowBatch& in, const std::vector<std::size_t>& rows, const AggSpec& spec) {
  const auto tag = spec.kind.tag;
  if (tag == AggTag::count) return static_cast<double>(rows.size());
  std::size_t c = in.schema().index_of(spec.column);
  std::vector<Value> vals;
  vals.reserve(rows.size());
  for (auto r : rows) vals.push_back(in.value(c, r));
  switch (tag) {
    case AggTag::sum: {
      if (in.schema().at(c).kind == ValueKind::int64) {
        std::int64_t s = 0;
        for (const auto& v : vals) s += std::get<std::int64_t>(v);
        return static_cast<double>(s);
      }
      long double s = 0;
      for (const auto& v : vals) s += numeric_value(v);
      return static_cast<double>(s);
    }
    case AggTag::avg: {
      long double num = 0;
      long double den = 0;
      std::optional<std::size_t> wc;
      if (!spec.weight.empty()) wc = in.schema().index_of(spec.weight);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        long double w = wc ? numeric_value(in.value(*wc, rows[i])) : 1.0L;
        num += w * numeric_value(vals[i]);
        den += w;
      }
      return static_cast<double>(num / den);
    }
    case AggTag::var:
    case AggTag::stddev: {
      if (vals.size() < 2) return 0.0;
      long double mean = 0;
      for (const auto& v : vals) mean += numeric_value(v);
      mean /= static_cast<long double>(vals.size());
      long double ss = 0;
      for (const auto& v : vals) ss += (numeric_value(v) - mean) * (numeric_value(v) - mean);
      double var = static_cast<double>(ss / static_cast<long double>(vals.size() - 1));
      return tag == AggTag::stddev ? std::sqrt(var) : var;
    }
    case AggTag::min:
      return *std::min_element(vals.begin(), vals.end());
    case AggTag::max:
      return *std::max_element(vals.begin(), vals.end());
    case AggTag::count_distinct:
      return static_cast<double>(std::set<Value>(vals.begin(), vals.end()).size());
    case AggTag::order_stat: {
      std::sort(vals.begin(), vals.end());
      return vals[static_cast<std::size_t>(std::floor(spec.kind.q * static_cast<double>(vals.size() - 1)))];
    }
    case AggTag::count:
      break;
  }
  throw ValidationError("unsupported aggregate");
}

RowBatch evaluate_node(const QueryGraph& graph, std::size_t i, const Bindings& bindings,
                       std::map<std::size_t, RowBatch>& memo) {
  if (auto it = memo.find(i); it != memo.end()) return it->second;
  const auto& node = graph.node(i);
  auto input = [&](std::size_t k) { return evaluate_node(graph, node.inputs[k], bindings, memo); };
  RowBatch out(node.schema);
  switch (node.spec.kind) {
    case NodeKind::read:
      out = read_all(node, bindings);
      break;
    case NodeKind::map:
      out = (*node.compiled_map)(input(0));
      break;
    case NodeKind::filter: {
      auto in = input(0);
      BoundPredicate pred(std::get<Predicate>(node.spec.params), in.schema());
      std::vector<std::size_t> keep;
      for (std::size_t r = 0; r < in.row_count(); ++r) {
        if (pred(in, r)) keep.push_back(r);
      }
      out = in.take(keep);
      break;
    }
    case NodeKind::join: {
      auto probe = input(0);
      auto build = input(1);
      const auto& spec = std::get<JoinSpec>(node.spec.params);
      std::vector<std::size_t> pk;
      std::vector<std::size_t> bk;
      for (const auto& [p, b] : spec.keys) {
        pk.push_back(probe.schema().index_of(p));
        bk.push_back(build.schema().index_of(b));
      }
      std::multimap<Key, std::size_t> index;
      for (std::size_t r = 0; r < build.row_count(); ++r) index.emplace(build.key(r, bk), r);
      BatchBuilder bb(node.schema);
      std::vector<Value> row;
      for (std::size_t r = 0; r < probe.row_count(); ++r) {
        auto [lo, hi] = index.equal_range(probe.key(r, pk));
        auto add = [&](std::optional<std::size_t> b) {
          row.clear();
          for (std::size_t c = 0; c < probe.column_count(); ++c) row.push_back(probe.value(c, r));
          for (std::size_t c = 0; c < build.column_count(); ++c) {
            if (std::find(bk.begin(), bk.end(), c) != bk.end()) continue;
            if (b) {
              row.push_back(build.value(c, *b));
            } else {
              switch (build.schema().at(c).kind) {
                case ValueKind::int64:
                  row.emplace_back(std::int64_t{0});
                  break;
                case ValueKind::float64:
                  row.emplace_back(0.0);
                  break;
                case ValueKind::utf8:
                  row.emplace_back(std::string());
                  break;
              }
            }
          }
          if (spec.how == JoinHow::left) row.emplace_back(std::int64_t{b ? 1 : 0});
          bb.add_row(row);
        };
        if (lo == hi && spec.how == JoinHow::left) add(std::nullopt);
        for (auto it = lo; it != hi; ++it) add(it->second);
      }
      out = std::move(bb).finish();
      break;
    }
    case NodeKind::agg: {
      auto in = input(0);
      const auto& p = std::get<AggParams>(node.spec.params);
      auto gcols = in.schema().indices_of(p.by);
      std::map<Key, std::vector<std::size_t>> groups;
      for (std::size_t r = 0; r < in.row_count(); ++r) groups[in.key(r, gcols)].push_back(r);
      BatchBuilder bb(node.schema);
      std::vector<Value> row;
      for (const auto& [k, rows] : groups) {
        row.assign(k.begin(), k.end());
        for (const auto& a : p.aggs) row.push_back(aggregate_rows(in, rows, a));
        bb.add_row(row);
      }
      out = std::move(bb).finish();
      break;
    }
    case NodeKind::sort_limit: {
      auto in = input(0);
      const auto& p = std::get<SortParams>(node.spec.params);
      std::vector<std::size_t> idx(in.row_count());
      std::iota(idx.begin(), idx.end(), 0);
      std::vector<std::size_t> cols;
      for (const auto& k : p.order) cols.push_back(in.schema().index_of(k.column));
      std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
          auto va = in.value(cols[j], a);
          auto vb = in.value(cols[j], b);
          if (va < vb) return !p.order[j].descending;
          if (vb < va) return p.order[j].descending;
        }
        return false;
      });
      idx.resize(std::min(idx.size(), p.limit));
      out = in.take(idx);
      break;
    }
  }
  out = out.with_schema(node.schema);
  memo.emplace(i, out);
  return out;
}

std::vector<std::size_t> row_order(const RowBatch& b) {
  std::vector<std::size_t> cols = b.schema().primary_key_indices();
  for (std::size_t c = 0; c < b.column_count(); ++c) {
    if (std::find(cols.begin(), cols.end(), c) == cols.end()) cols.push_back(c);
  }
  std::vector<std::size_t> idx(b.row_count());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return b.key(x, cols) < b.key(y, cols); });
  return idx;
}

}  // namespace

RowBatch evaluate_batch(const QueryGraph& graph, const Bindings& bindings) {
  std::map<std::size_t, RowBatch> memo;
  return evaluate_node(graph, graph.output(), bindings, memo);
}

BatchDiff compare_batches(const RowBatch& actual, const RowBatch& expected, double rel_tol) {
  BatchDiff d;
  auto fail = [&](std::string m) {
    d.equal = false;
    d.message = std::move(m);
    return d;
  };
  if (actual.column_count() != expected.column_count()) return fail("column counts differ");
  for (std::size_t c = 0; c < actual.column_count(); ++c) {
    const auto& a = actual.schema().at(c);
    const auto& e = expected.schema().at(c);
    if (a.name != e.name || a.kind != e.kind) return fail("column " + std::to_string(c) + " differs: " + a.name + " vs " + e.name);
  }
  if (actual.row_count() != expected.row_count()) {
    return fail("row counts differ: " + std::to_string(actual.row_count()) + " vs " +
                std::to_string(expected.row_count()));
  }
  auto ia = row_order(actual);
  auto ie = row_order(expected);
  for (std::size_t i = 0; i < ia.size(); ++i) {
    for (std::size_t c = 0; c < actual.column_count(); ++c) {
      Value va = actual.value(c, ia[i]);
      Value ve = expected.value(c, ie[i]);
      bool same;
      if (kind_of(va) == ValueKind::float64) {
        double x = std::get<double>(va);
        double y = std::get<double>(ve);
        if (std::isnan(x) || std::isnan(y)) {
          same = std::isnan(x) && std::isnan(y);
        } else if (rel_tol == 0.0) {
          same = x == y;
        } else {
          same = std::abs(x - y) <= rel_tol * std::max(std::abs(x), std::abs(y)) + 1e-12;
        }
      } else {
        same = va == ve;
      }
      if (!same) {
        return fail("row " + std::to_string(i) + " column '" + actual.schema().at(c).name + "': " + to_string(va) +
                    " vs " + to_string(ve));
      }
    }
  }
  return d;
}

}  // namespace edf
