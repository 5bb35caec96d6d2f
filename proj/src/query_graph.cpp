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

#include "edf/query_graph.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "edf/error.hpp"

namespace edf {

std::string_view to_string(NodeKind k) {
  switch (k) {
    case NodeKind::read:
      return "read";
    case NodeKind::map:
      return "map";
    case NodeKind::filter:
      return "filter";
    case NodeKind::join:
      return "join";
    case NodeKind::agg:
      return "agg";
    case NodeKind::sort_limit:
      return "sort_limit";
  }
  return "?";
}

std::size_t arity_of(NodeKind k) {
  switch (k) {
    case NodeKind::read:
      return 0;
    case NodeKind::join:
      return 2;
    default:
      return 1;
  }
}

QueryGraphSpec& QueryGraphSpec::add_node(NodeSpec n) {
  nodes.push_back(std::move(n));
  return *this;
}

QueryGraphSpec& QueryGraphSpec::add_edge(std::string from, std::string to, std::size_t slot) {
  edges.push_back({std::move(from), std::move(to), slot});
  return *this;
}

QueryGraphSpec& QueryGraphSpec::read(std::string id, std::string table) {
  return add_node({std::move(id), NodeKind::read, ReadParams{std::move(table)}});
}

QueryGraphSpec& QueryGraphSpec::map(std::string id, std::string input, MapSpec spec) {
  add_edge(std::move(input), id, 0);
  return add_node({std::move(id), NodeKind::map, std::move(spec)});
}

QueryGraphSpec& QueryGraphSpec::filter(std::string id, std::string input, Predicate p) {
  add_edge(std::move(input), id, 0);
  return add_node({std::move(id), NodeKind::filter, std::move(p)});
}

QueryGraphSpec& QueryGraphSpec::join(std::string id, std::string probe, std::string build, JoinSpec spec) {
  add_edge(std::move(probe), id, 0);
  add_edge(std::move(build), id, 1);
  return add_node({std::move(id), NodeKind::join, std::move(spec)});
}

QueryGraphSpec& QueryGraphSpec::agg(std::string id, std::string input, std::vector<std::string> by,
                                    std::vector<AggSpec> aggs) {
  add_edge(std::move(input), id, 0);
  return add_node({std::move(id), NodeKind::agg, AggParams{std::move(by), std::move(aggs)}});
}

QueryGraphSpec& QueryGraphSpec::sort_limit(std::string id, std::string input, std::vector<SortKey> order,
                                           std::size_t limit) {
  add_edge(std::move(input), id, 0);
  return add_node({std::move(id), NodeKind::sort_limit, SortParams{std::move(order), limit}});
}

std::optional<std::size_t> QueryGraph::find(std::string_view id) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].spec.id == id) return i;
  }
  return std::nullopt;
}

std::vector<std::string> QueryGraph::tables() const {
  std::vector<std::string> out;
  for (const auto& n : nodes_) {
    if (n.spec.kind != NodeKind::read) continue;
    const auto& t = std::get<ReadParams>(n.spec.params).table;
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  }
  return out;
}

std::unique_ptr<Operator> QueryGraph::make_operator(std::size_t index, const ExtrinsicOptions& options) const {
  const auto& n = nodes_.at(index);
  switch (n.spec.kind) {
    case NodeKind::read:
      throw ValidationError("reader nodes have no operator");
    case NodeKind::map:
      return std::make_unique<MapOperator>(n.compiled_map);
    case NodeKind::filter: {
      const auto& input = *nodes_[n.inputs[0]].schema;
      return std::make_unique<FilterOperator>(BoundPredicate(std::get<Predicate>(n.spec.params), input), n.schema);
    }
    case NodeKind::join:
      if (n.merge_join) return std::make_unique<MergeJoinOperator>(n.join_plan);
      return std::make_unique<HashJoinOperator>(n.join_plan, nodes_[n.inputs[1]].schema);
    case NodeKind::agg: {
      const auto& p = std::get<AggParams>(n.spec.params);
      const auto& in = nodes_[n.inputs[0]];
      return std::make_unique<AggregateOperator>(*in.schema, p.by, p.aggs, in.mode, options);
    }
    case NodeKind::sort_limit: {
      const auto& p = std::get<SortParams>(n.spec.params);
      return std::make_unique<SortLimitOperator>(n.schema, p.order, p.limit);
    }
  }
  throw ValidationError("unknown node kind");
}

QueryGraph build_graph(const QueryGraphSpec& spec, const std::map<std::string, SchemaPtr>& tables) {
  const std::size_t n = spec.nodes.size();
  if (n == 0) throw ValidationError("query graph has no nodes");
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& node = spec.nodes[i];
    if (node.id.empty()) throw ValidationError("node without id");
    if (!index.emplace(node.id, i).second) throw ValidationError("duplicate node id '" + node.id + "'");
    bool params_ok = false;
    switch (node.kind) {
      case NodeKind::read:
        params_ok = std::holds_alternative<ReadParams>(node.params);
        break;
      case NodeKind::map:
        params_ok = std::holds_alternative<MapSpec>(node.params);
        break;
      case NodeKind::filter:
        params_ok = std::holds_alternative<Predicate>(node.params);
        break;
      case NodeKind::join:
        params_ok = std::holds_alternative<JoinSpec>(node.params);
        break;
      case NodeKind::agg:
        params_ok = std::holds_alternative<AggParams>(node.params);
        break;
      case NodeKind::sort_limit:
        params_ok = std::holds_alternative<SortParams>(node.params);
        break;
    }
    if (!params_ok) throw ValidationError("node '" + node.id + "' has parameters of the wrong kind");
  }

  std::vector<std::vector<std::optional<std::size_t>>> slots(n);
  for (std::size_t i = 0; i < n; ++i) slots[i].resize(arity_of(spec.nodes[i].kind));
  std::vector<std::vector<std::size_t>> consumers(n);
  for (const auto& e : spec.edges) {
    auto f = index.find(e.from);
    auto t = index.find(e.to);
    if (f == index.end()) throw ValidationError("edge from unknown node '" + e.from + "'");
    if (t == index.end()) throw ValidationError("edge to unknown node '" + e.to + "'");
    auto& s = slots[t->second];
    if (e.slot >= s.size()) {
      throw ValidationError("arity mismatch: '" + e.to + "' (" + std::string(to_string(spec.nodes[t->second].kind)) +
                            ") takes " + std::to_string(s.size()) + " inputs");
    }
    if (s[e.slot]) throw ValidationError("input " + std::to_string(e.slot) + " of '" + e.to + "' bound twice");
    s[e.slot] = f->second;
    consumers[f->second].push_back(t->second);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < slots[i].size(); ++k) {
      if (!slots[i][k]) {
        throw ValidationError("arity mismatch: '" + spec.nodes[i].id + "' (" +
                              std::string(to_string(spec.nodes[i].kind)) + ") needs " +
                              std::to_string(slots[i].size()) + " inputs");
      }
    }
  }

  // Kahn's algorithm; ties resolve in declaration order.
  std::vector<std::size_t> indegree(n);
  for (std::size_t i = 0; i < n; ++i) indegree[i] = slots[i].size();
  std::deque<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push_back(i);
  }
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    auto i = ready.front();
    ready.pop_front();
    order.push_back(i);
    for (auto c : consumers[i]) {
      if (--indegree[c] == 0) ready.push_back(c);
    }
  }
  if (order.size() != n) throw ValidationError("query graph has a cycle");

  std::vector<std::size_t> position(n);
  for (std::size_t p = 0; p < n; ++p) position[order[p]] = p;

  QueryGraph g;
  g.nodes_.resize(n);
  for (std::size_t p = 0; p < n; ++p) {
    const auto& ns = spec.nodes[order[p]];
    auto& node = g.nodes_[p];
    node.spec = ns;
    for (const auto& s : slots[order[p]]) node.inputs.push_back(position[*s]);
    for (auto c : consumers[order[p]]) node.consumers.push_back(position[c]);
    try {
      switch (ns.kind) {
        case NodeKind::read: {
          const auto& t = std::get<ReadParams>(ns.params).table;
          auto it = tables.find(t);
          if (it == tables.end()) throw ValidationError("unknown table '" + t + "'");
          node.schema = it->second;
          node.mode = DeltaKind::append;
          node.op_class = OperatorClass::order_preserving_local;
          break;
        }
        case NodeKind::map: {
          const auto& in = g.nodes_[node.inputs[0]];
          node.compiled_map = std::make_shared<const CompiledMap>(std::get<MapSpec>(ns.params), *in.schema);
          node.schema = node.compiled_map->output_schema();
          node.mode = in.mode;
          node.op_class = classify_map(*node.compiled_map, in.mode);
          break;
        }
        case NodeKind::filter: {
          const auto& in = g.nodes_[node.inputs[0]];
          BoundPredicate pred(std::get<Predicate>(ns.params), *in.schema);
          node.schema = in.schema;
          node.mode = in.mode;
          node.op_class = classify_filter(pred, in.mode);
          break;
        }
        case NodeKind::join: {
          const auto& probe = g.nodes_[node.inputs[0]];
          const auto& build = g.nodes_[node.inputs[1]];
          const auto& js = std::get<JoinSpec>(ns.params);
          node.join_plan = std::make_shared<const JoinPlan>(js, probe.schema, build.schema);
          bool can_merge = node.join_plan->mergeable() && probe.mode == DeltaKind::append &&
                           build.mode == DeltaKind::append;
          if (js.method == JoinMethod::merge && !can_merge) {
            throw ValidationError("merge join needs both inputs appended and clustered on the join keys");
          }
          node.merge_join = js.method == JoinMethod::merge || (js.method == JoinMethod::automatic && can_merge);
          node.schema = node.join_plan->output_schema();
          node.mode = node.merge_join ? DeltaKind::append : probe.mode;
          node.op_class = node.mode == DeltaKind::append ? OperatorClass::order_preserving_local
                                                         : OperatorClass::shuffle_without_inference;
          break;
        }
        case NodeKind::agg: {
          const auto& in = g.nodes_[node.inputs[0]];
          const auto& ap = std::get<AggParams>(ns.params);
          if (ap.aggs.empty()) throw ValidationError("aggregation without aggregates");
          bool local = agg_is_local(*in.schema, ap.by, in.mode);
          node.schema = agg_output_schema(*in.schema, ap.by, ap.aggs, local);
          node.mode = local ? DeltaKind::append : DeltaKind::replace;
          node.op_class = classify_agg(local);
          break;
        }
        case NodeKind::sort_limit: {
          const auto& in = g.nodes_[node.inputs[0]];
          for (const auto& k : std::get<SortParams>(ns.params).order) in.schema->index_of(k.column);
          node.schema = in.schema;
          node.mode = DeltaKind::replace;
          node.op_class = OperatorClass::shuffle_without_inference;
          break;
        }
      }
    } catch (const ValidationError& e) {
      throw ValidationError("node '" + ns.id + "': " + e.what());
    }
  }

  std::vector<std::size_t> sinks;
  for (std::size_t i = 0; i < n; ++i) {
    if (g.nodes_[i].consumers.empty()) sinks.push_back(i);
  }
  if (sinks.size() != 1) throw ValidationError("query graph must have exactly one sink, found " + std::to_string(sinks.size()));
  g.output_ = sinks.front();
  if (spec.output) {
    auto o = g.find(*spec.output);
    if (!o) throw ValidationError("unknown output node '" + *spec.output + "'");
    if (*o != g.output_) throw ValidationError("output node '" + *spec.output + "' is not the sink");
  }
  return g;
}

}  // namespace edf
