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

#include "edf/batch_oracle.hpp"
#include "edf/error.hpp"
#include "edf/executor.hpp"
#include "edf/workload.hpp"
#include "oracles.hpp"

namespace edf {
namespace {

using oracle::batch;
using oracle::col;

QueryGraph by_state(const Bindings& b) {
  QueryGraphSpec q;
  q.read("s", "students").agg("a", "s", {"state"},
                             {{{AggTag::count}, "", "", "n"}, {{AggTag::avg}, "score", "", "avg_score"}});
  return build_graph(q, b.schemas());
}

TEST(Executor, OneSnapshotPerPartitionEndingExact) {
  auto data = make_students(400, 4, 3);
  auto b = data.bindings(11);
  auto g = by_state(b);
  auto snaps = run(g, b);
  ASSERT_EQ(snaps.size(), 4u);
  for (std::size_t i = 0; i < snaps.size(); ++i) {
    EXPECT_EQ(snaps[i].index, i);
    if (i > 0) EXPECT_GT(snaps[i].t(), snaps[i - 1].t());
  }
  EXPECT_EQ(snaps.back().t(), 1.0);
  auto diff = compare_batches(*snaps.back().rows, evaluate_batch(g, b), 1e-12);
  EXPECT_TRUE(diff.equal) << diff.message;
}

TEST(Executor, PipelinedMatchesSequential) {
  for (const auto& w : benchmark_suite(5)) {
    auto b = w.data.bindings(9);
    auto g = build_graph(w.query.graph, b.schemas());
    auto par = run(g, b);
    auto seq = run_sequential(g, b);
    ASSERT_EQ(par.size(), seq.size()) << w.name;
    for (std::size_t i = 0; i < par.size(); ++i) {
      EXPECT_EQ(par[i].progress, seq[i].progress) << w.name;
      auto diff = compare_batches(*par[i].rows, *seq[i].rows, 0.0);
      EXPECT_TRUE(diff.equal) << w.name << " snapshot " << i << ": " << diff.message;
    }
  }
}

TEST(Executor, EmptyTableGivesOneFinalSnapshot) {
  auto s = make_schema(EdfSchema({col("id", ValueKind::int64), col("g", ValueKind::int64)}, {"id"}));
  Bindings b;
  std::vector<BatchPtr> none;
  b.sources["t"] = std::make_shared<CachedPartitionSource>(make_memory_meta("t", s, none), none);
  QueryGraphSpec q;
  q.read("r", "t").agg("a", "r", {"g"}, {{{AggTag::count}, "", "", "n"}});
  auto g = build_graph(q, b.schemas());
  for (auto* runner : {+[](const QueryGraph& g, const Bindings& b) { return run(g, b); },
                       +[](const QueryGraph& g, const Bindings& b) { return run_sequential(g, b); }}) {
    auto snaps = runner(g, b);
    ASSERT_EQ(snaps.size(), 1u);
    EXPECT_EQ(snaps[0].t(), 1.0);
    EXPECT_EQ(snaps[0].rows->row_count(), 0u);
  }
}

TEST(Executor, HashJoinWaitsForBuild) {
  auto data = make_promo(600, 40, 6, 2);
  auto b = data.bindings(4);
  auto g = build_graph(promo_query(), b.schemas());
  auto snaps = run(g, b);
  // part is one partition; every snapshot comes after the build side is complete.
  ASSERT_EQ(snaps.size(), 6u);
  auto diff = compare_batches(*snaps.back().rows, evaluate_batch(g, b), 1e-9);
  EXPECT_TRUE(diff.equal) << diff.message;
}

TEST(Executor, WorkerErrorsPropagate) {
  auto s = make_schema(EdfSchema({col("id", ValueKind::int64), col("x", ValueKind::int64)}, {"id"}));
  std::vector<BatchPtr> parts{std::make_shared<const RowBatch>(batch(s, {{std::int64_t{1}, std::int64_t{0}}}))};
  Bindings b;
  b.sources["t"] = std::make_shared<CachedPartitionSource>(make_memory_meta("t", s, parts), parts);
  QueryGraphSpec q;
  q.read("r", "t").map("m", "r", MapSpec{std::nullopt, {{"y", "div", {ExprArg::num(1), ExprArg::col("x")}}}});
  auto g = build_graph(q, b.schemas());
  EXPECT_THROW(run(g, b), ExecutionError);
  EXPECT_THROW(run_sequential(g, b), ExecutionError);
}

TEST(Executor, IntervalsAndTrace) {
  auto data = make_students(300, 5, 8);
  auto b = data.bindings(2);
  auto g = by_state(b);
  TraceLog trace;
  RunOptions opt;
  opt.extrinsic.track_variance = true;
  opt.ci_delta = 0.05;
  opt.trace = &trace;
  auto snaps = run(g, b, opt);
  ASSERT_FALSE(snaps.empty());
  const auto& first = snaps.front();
  ASSERT_EQ(first.ci.size(), 2u);
  for (const auto& c : first.ci) {
    ASSERT_EQ(c.rows.size(), first.rows->row_count());
    for (std::size_t r = 0; r < c.rows.size(); ++r) {
      double v = std::get<double>(first.rows->value(c.column, r));
      EXPECT_LE(c.rows[r].lo, v);
      EXPECT_GE(c.rows[r].hi, v);
    }
  }
  for (const auto& c : snaps.back().ci) {
    for (const auto& iv : c.rows) EXPECT_EQ(iv.lo, iv.hi);
  }
  std::set<std::string> nodes;
  for (const auto& e : trace.entries()) {
    nodes.insert(e.node);
    EXPECT_LE(e.start_ns, e.end_ns);
  }
  EXPECT_EQ(nodes, (std::set<std::string>{"s", "a"}));
}

}  // namespace
}  // namespace edf
