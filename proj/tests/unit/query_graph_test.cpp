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

#include <gtest/gtest.h>

#include "edf/error.hpp"
#include "edf/query_graph.hpp"
#include "oracles.hpp"

namespace edf {
namespace {

using oracle::col;

std::map<std::string, SchemaPtr> catalog() {
  std::map<std::string, SchemaPtr> t;
  t["lineitem"] = make_schema(EdfSchema({col("orderkey", ValueKind::int64), col("linenumber", ValueKind::int64),
                                         col("partkey", ValueKind::int64), col("price", ValueKind::float64),
                                         col("discount", ValueKind::float64)},
                                        {"orderkey", "linenumber"}, std::vector<std::string>{"orderkey"}));
  t["orders"] = make_schema(EdfSchema({col("orderkey", ValueKind::int64), col("priority", ValueKind::utf8)},
                                      {"orderkey"}, std::vector<std::string>{"orderkey"}));
  t["part"] = make_schema(EdfSchema({col("partkey", ValueKind::int64), col("p_type", ValueKind::utf8)}, {"partkey"}));
  return t;
}

AggSpec sum_of(std::string c) { return {{AggTag::sum}, c, "", "sum_" + c}; }

TEST(QueryGraph, ReadThenAggregate) {
  QueryGraphSpec q;
  q.read("l", "lineitem").agg("a", "l", {"partkey"}, {sum_of("price")});
  auto g = build_graph(q, catalog());
  ASSERT_EQ(g.nodes().size(), 2u);
  EXPECT_EQ(g.output_node().spec.id, "a");
  EXPECT_EQ(g.output_node().mode, DeltaKind::replace);
  EXPECT_EQ(g.output_node().op_class, OperatorClass::shuffle_with_inference);
  EXPECT_EQ(g.output_node().schema->primary_key(), std::vector<std::string>{"partkey"});
  EXPECT_EQ(g.tables(), std::vector<std::string>{"lineitem"});
}

// lineitem ⋈ orders (merge), local aggregation per order, map, then a
// shuffled aggregation and a top-k.
TEST(QueryGraph, MultiStagePlan) {
  QueryGraphSpec q;
  MapSpec net{std::nullopt, {{"net", "mul_one_minus", {ExprArg::col("price"), ExprArg::col("discount")}}}};
  q.read("l", "lineitem")
      .read("o", "orders")
      .join("lo", "l", "o", {{{"orderkey", "orderkey"}}, JoinHow::inner, JoinMethod::automatic})
      .map("m", "lo", net)
      .agg("per_order", "m", {"orderkey", "priority"}, {sum_of("net")})
      .agg("per_priority", "per_order", {"priority"}, {{{AggTag::avg}, "sum_net", "", "avg_rev"}})
      .sort_limit("top", "per_priority", {{"avg_rev", true}}, 2);
  auto g = build_graph(q, catalog());
  auto node = [&](const char* id) -> const GraphNode& { return g.node(*g.find(id)); };
  EXPECT_TRUE(node("lo").merge_join);
  EXPECT_EQ(node("lo").mode, DeltaKind::append);
  EXPECT_EQ(node("m").mode, DeltaKind::append);
  EXPECT_EQ(node("per_order").op_class, OperatorClass::order_preserving_local);
  EXPECT_EQ(node("per_order").mode, DeltaKind::append);
  EXPECT_EQ(node("per_priority").mode, DeltaKind::replace);
  EXPECT_EQ(node("top").mode, DeltaKind::replace);
  EXPECT_EQ(g.output_node().spec.id, "top");
  // Topological order: every input precedes its consumer.
  for (std::size_t i = 0; i < g.nodes().size(); ++i) {
    for (auto in : g.node(i).inputs) EXPECT_LT(in, i);
  }
}

TEST(QueryGraph, HashJoinOnUnclusteredBuild) {
  QueryGraphSpec q;
  q.read("l", "lineitem").read("p", "part").join("lp", "l", "p", {{{"partkey", "partkey"}}, JoinHow::inner,
                                                                   JoinMethod::automatic});
  auto g = build_graph(q, catalog());
  EXPECT_FALSE(g.output_node().merge_join);
  auto forced = q;
  std::get<JoinSpec>(forced.nodes.back().params).method = JoinMethod::merge;
  EXPECT_THROW(build_graph(forced, catalog()), ValidationError);
}

TEST(QueryGraph, ValidationErrors) {
  {
    QueryGraphSpec q;
    q.read("l", "lineitem");
    q.add_node({"j", NodeKind::join, JoinSpec{{{"partkey", "partkey"}}}});
    q.add_edge("l", "j", 0);
    EXPECT_THROW(build_graph(q, catalog()), ValidationError);  // one input on a join
  }
  {
    QueryGraphSpec q;
    q.add_node({"a", NodeKind::filter, Predicate{}});
    q.add_node({"b", NodeKind::filter, Predicate{}});
    q.add_edge("a", "b");
    q.add_edge("b", "a");
    EXPECT_THROW(build_graph(q, catalog()), ValidationError);
  }
  {
    QueryGraphSpec q;
    q.read("l", "lineitem").agg("a", "l", {"nope"}, {sum_of("price")});
    EXPECT_THROW(build_graph(q, catalog()), ValidationError);
  }
  {
    QueryGraphSpec q;
    q.read("x", "missing_table");
    EXPECT_THROW(build_graph(q, catalog()), ValidationError);
  }
  {
    QueryGraphSpec q;
    q.read("l", "lineitem").read("o", "orders");
    EXPECT_THROW(build_graph(q, catalog()), ValidationError);  // two sinks
  }
  {
    QueryGraphSpec q;
    q.read("l", "lineitem").read("l", "orders");
    EXPECT_THROW(build_graph(q, catalog()), ValidationError);
  }
  {
    QueryGraphSpec q;
    q.read("l", "lineitem").filter("f", "l", Predicate{{{"price", CompareOp::gt, std::string("x")}}});
    EXPECT_THROW(build_graph(q, catalog()), ValidationError);
  }
}

TEST(QueryGraph, FilterOnMutableInputReplaces) {
  QueryGraphSpec q;
  q.read("l", "lineitem")
      .agg("a", "l", {"partkey"}, {sum_of("price")})
      .filter("f", "a", Predicate{{{"sum_price", CompareOp::gt, 10.0}}});
  auto g = build_graph(q, catalog());
  EXPECT_EQ(g.output_node().mode, DeltaKind::replace);
  EXPECT_EQ(g.output_node().op_class, OperatorClass::shuffle_without_inference);
}

}  // namespace
}  // namespace edf
