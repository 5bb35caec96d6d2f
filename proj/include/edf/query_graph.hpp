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
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "edf/agg_state.hpp"
#include "edf/expr.hpp"
#include "edf/message.hpp"
#include "edf/operators.hpp"
#include "edf/schema.hpp"

namespace edf {

enum class NodeKind : std::uint8_t { read, map, filter, join, agg, sort_limit };

std::string_view to_string(NodeKind k);
std::size_t arity_of(NodeKind k);

struct ReadParams {
  std::string table;
};
struct AggParams {
  std::vector<std::string> by;
  std::vector<AggSpec> aggs;
};
struct SortParams {
  std::vector<SortKey> order;
  std::size_t limit = 0;
};

using NodeParams = std::variant<ReadParams, MapSpec, Predicate, JoinSpec, AggParams, SortParams>;

struct NodeSpec {
  std::string id;
  NodeKind kind = NodeKind::read;
  NodeParams params;
};

/// Directed edge; `slot` is the consumer's input position (join: 0 probe / left, 1 build / right).
struct EdgeSpec {
  std::string from;
  std::string to;
  std::size_t slot = 0;
};

/// Unvalidated query description, built incrementally.
struct QueryGraphSpec {
  std::vector<NodeSpec> nodes;
  std::vector<EdgeSpec> edges;
  std::optional<std::string> output;  ///< leaf node; defaults to the unique sink

  QueryGraphSpec& add_node(NodeSpec n);
  QueryGraphSpec& add_edge(std::string from, std::string to, std::size_t slot = 0);

  // Convenience builders; each adds the node and its input edges.
  QueryGraphSpec& read(std::string id, std::string table);
  QueryGraphSpec& map(std::string id, std::string input, MapSpec spec);
  QueryGraphSpec& filter(std::string id, std::string input, Predicate p);
  QueryGraphSpec& join(std::string id, std::string probe, std::string build, JoinSpec spec);
  QueryGraphSpec& agg(std::string id, std::string input, std::vector<std::string> by, std::vector<AggSpec> aggs);
  QueryGraphSpec& sort_limit(std::string id, std::string input, std::vector<SortKey> order, std::size_t limit);
};

/// A validated node: resolved inputs, static output schema and delta mode.
struct GraphNode {
  NodeSpec spec;
  std::vector<std::size_t> inputs;  ///< node index per slot
  std::vector<std::size_t> consumers;
  SchemaPtr schema;
  DeltaKind mode = DeltaKind::append;
  OperatorClass op_class = OperatorClass::order_preserving_local;
  bool merge_join = false;
  std::shared_ptr<const CompiledMap> compiled_map;
  std::shared_ptr<const JoinPlan> join_plan;
};

class QueryGraph {
 public:
  const std::vector<GraphNode>& nodes() const { return nodes_; }  ///< topological order
  const GraphNode& node(std::size_t i) const { return nodes_.at(i); }
  std::size_t output() const { return output_; }
  const GraphNode& output_node() const { return nodes_.at(output_); }
  std::optional<std::size_t> find(std::string_view id) const;
  std::vector<std::string> tables() const;

  /// Fresh streaming operator for a non-reader node.
  std::unique_ptr<Operator> make_operator(std::size_t index, const ExtrinsicOptions& options) const;

 private:
  friend QueryGraph build_graph(const QueryGraphSpec&, const std::map<std::string, SchemaPtr>&);
  std::vector<GraphNode> nodes_;
  std::size_t output_ = 0;
};

/// Validates arity, acyclicity, table bindings and attribute references and
/// derives every node's schema. Throws ValidationError.
QueryGraph build_graph(const QueryGraphSpec& spec, const std::map<std::string, SchemaPtr>& tables);

}  // namespace edf
