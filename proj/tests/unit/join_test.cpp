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

#include <random>

#include "edf/error.hpp"
#include "edf/operators.hpp"
#include "oracles.hpp"

namespace edf {
namespace {

using oracle::batch;
using oracle::col;

SchemaPtr probe_schema(bool clustered = false) {
  std::optional<std::vector<std::string>> ck;
  if (clustered) ck = std::vector<std::string>{"k"};
  return make_schema(EdfSchema({col("id", ValueKind::int64), col("k", ValueKind::int64), col("x", ValueKind::float64)},
                               {"id"}, ck));
}

SchemaPtr build_schema(bool clustered = false) {
  std::optional<std::vector<std::string>> ck;
  if (clustered) ck = std::vector<std::string>{"key"};
  return make_schema(EdfSchema({col("key", ValueKind::int64), col("line", ValueKind::int64),
                                col("label", ValueKind::utf8)},
                               {"key", "line"}, ck));
}

JoinSpec on_k(JoinHow how = JoinHow::inner) { return JoinSpec{{{"k", "key"}}, how, JoinMethod::automatic}; }

RowBatch random_probe(std::mt19937_64& rng, std::size_t n, std::int64_t keys, std::int64_t first_id = 0) {
  BatchBuilder b(probe_schema());
  for (std::size_t i = 0; i < n; ++i) {
    b.add_row(std::vector<Value>{first_id + static_cast<std::int64_t>(i), static_cast<std::int64_t>(rng() % keys),
                                 static_cast<double>(rng() % 100)});
  }
  return std::move(b).finish();
}

RowBatch random_build(std::mt19937_64& rng, std::size_t n, std::int64_t keys) {
  BatchBuilder b(build_schema());
  for (std::size_t i = 0; i < n; ++i) {
    b.add_row(std::vector<Value>{static_cast<std::int64_t>(rng() % keys), static_cast<std::int64_t>(i),
                                 "b" + std::to_string(i)});
  }
  return std::move(b).finish();
}

TEST(HashJoin, EmptyProbe) {
  JoinPlan plan(on_k(), probe_schema(), build_schema());
  std::mt19937_64 rng(1);
  JoinTable t(std::make_shared<const RowBatch>(random_build(rng, 10, 5)), plan.build_keys());
  EXPECT_EQ(hash_join(RowBatch(probe_schema()), t, plan).row_count(), 0u);
}

TEST(HashJoin, SingleMatch) {
  JoinPlan plan(on_k(), probe_schema(), build_schema());
  auto build = batch(build_schema(), {{std::int64_t{7}, std::int64_t{1}, std::string("seven")}});
  JoinTable t(std::make_shared<const RowBatch>(build), plan.build_keys());
  auto out = hash_join(batch(probe_schema(), {{std::int64_t{1}, std::int64_t{7}, 2.5}}), t, plan);
  EXPECT_EQ(oracle::rows_of(out), (std::vector<std::vector<Value>>{
                                      {std::int64_t{1}, std::int64_t{7}, 2.5, std::int64_t{1}, std::string("seven")}}));
  EXPECT_EQ(out.schema().primary_key(), (std::vector<std::string>{"id", "line"}));
}

TEST(HashJoin, RandomMatchesNestedLoop) {
  std::mt19937_64 rng(2);
  for (auto how : {JoinHow::inner, JoinHow::left}) {
    JoinPlan plan(on_k(how), probe_schema(), build_schema());
    for (int trial = 0; trial < 10; ++trial) {
      auto probe = random_probe(rng, 100, 40);
      auto build = random_build(rng, 100, 60);
      JoinTable t(std::make_shared<const RowBatch>(build), plan.build_keys());
      auto out = hash_join(probe, t, plan);
      EXPECT_EQ(oracle::row_set(out), oracle::nested_loop_join(probe, build, 1, 0, how == JoinHow::left));
    }
  }
}

TEST(JoinPlan, SchemaRules) {
  JoinPlan left(on_k(JoinHow::left), probe_schema(), build_schema());
  const auto& s = *left.output_schema();
  EXPECT_EQ(s.attributes().back().name, "_matched");
  EXPECT_FALSE(s.find("key").has_value());
  auto clash = make_schema(EdfSchema({col("key", ValueKind::int64), col("x", ValueKind::float64)}, {"key"}));
  EXPECT_THROW(JoinPlan(on_k(), probe_schema(), clash), ValidationError);
  auto text_key = make_schema(EdfSchema({col("key", ValueKind::utf8)}, {"key"}));
  EXPECT_THROW(JoinPlan(on_k(), probe_schema(), text_key), ValidationError);
  EXPECT_FALSE(JoinPlan(on_k(), probe_schema(), build_schema()).mergeable());
  JoinPlan clustered(on_k(), probe_schema(true), build_schema(true));
  EXPECT_TRUE(clustered.mergeable());
  EXPECT_EQ(clustered.output_schema()->clustering_key(), std::optional(std::vector<std::string>{"k"}));
}

// Both sides sorted on the key and cut into partitions at key boundaries.
std::vector<BatchPtr> clustered_parts(const RowBatch& sorted, std::size_t key_col, std::size_t parts) {
  std::vector<BatchPtr> out;
  std::size_t n = sorted.row_count();
  std::size_t lo = 0;
  for (std::size_t p = 1; p <= parts && lo < n; ++p) {
    std::size_t hi = p == parts ? n : std::max(lo + 1, n * p / parts);
    while (hi < n && sorted.value(key_col, hi) == sorted.value(key_col, hi - 1)) ++hi;
    std::vector<std::size_t> idx;
    for (std::size_t i = lo; i < hi; ++i) idx.push_back(i);
    out.push_back(std::make_shared<const RowBatch>(sorted.take(idx).with_schema(
        key_col == 1 ? probe_schema(true) : build_schema(true))));
    lo = hi;
  }
  return out;
}

RowBatch sorted_by(const RowBatch& b, std::size_t c) {
  std::vector<std::size_t> idx(b.row_count());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](auto x, auto y) { return b.value(c, x) < b.value(c, y); });
  return b.take(idx);
}

TEST(MergeJoin, MatchesHashJoinAndNestedLoop) {
  std::mt19937_64 rng(3);
  for (auto how : {JoinHow::inner, JoinHow::left}) {
    JoinPlan mplan(on_k(how), probe_schema(true), build_schema(true));
    ASSERT_TRUE(mplan.mergeable());
    for (int trial = 0; trial < 20; ++trial) {
      auto probe = sorted_by(random_probe(rng, 80, 30), 1);
      auto build = sorted_by(random_build(rng, 60, 30), 0);
      auto left = clustered_parts(probe, 1, 1 + rng() % 6);
      auto right = clustered_parts(build, 0, 1 + rng() % 6);
      auto out = merge_join(left, right, mplan);
      EXPECT_EQ(oracle::row_set(out), oracle::nested_loop_join(probe, build, 1, 0, how == JoinHow::left));
    }
  }
}

TEST(MergeJoin, DisjointRangesGiveNothing) {
  JoinPlan plan(on_k(), probe_schema(true), build_schema(true));
  auto probe = batch(probe_schema(true), {{std::int64_t{1}, std::int64_t{1}, 1.0}, {std::int64_t{2}, std::int64_t{2}, 1.0}});
  auto build = batch(build_schema(true), {{std::int64_t{5}, std::int64_t{0}, std::string("x")}});
  std::vector<BatchPtr> l{std::make_shared<const RowBatch>(probe)};
  std::vector<BatchPtr> r{std::make_shared<const RowBatch>(build)};
  EXPECT_EQ(merge_join(l, r, plan).row_count(), 0u);
}

TEST(MergeJoin, StreamsAndPrunes) {
  JoinPlan plan(on_k(), probe_schema(true), build_schema(true));
  MergeJoiner j(plan);
  auto p = [&](std::int64_t id, std::int64_t k) {
    return std::make_shared<const RowBatch>(batch(probe_schema(true), {{id, k, 0.0}}));
  };
  auto b = [&](std::int64_t k, std::int64_t line) {
    return std::make_shared<const RowBatch>(batch(build_schema(true), {{k, line, std::string("v")}}));
  };
  j.push_left(p(1, 5));
  EXPECT_FALSE(j.pop_ready().has_value());  // right side has not reached 5
  j.push_right(b(3, 0));
  EXPECT_FALSE(j.pop_ready().has_value());
  // Clustered partitions never split a key, so reaching 5 on the right is enough.
  j.push_right(b(5, 1));
  auto out = j.pop_ready();
  ASSERT_TRUE(out.has_value());
  EXPECT_EQ(out->row_count(), 1u);
  EXPECT_EQ(j.buffered_right_rows(), 0u);
  j.push_right(b(6, 2));
  EXPECT_EQ(j.buffered_right_rows(), 1u);
  EXPECT_THROW(j.push_left(p(2, 4)), ValidationError);
}

TEST(MergeJoin, CloseRightFlushes) {
  JoinPlan plan(on_k(JoinHow::left), probe_schema(true), build_schema(true));
  MergeJoiner j(plan);
  j.push_left(std::make_shared<const RowBatch>(batch(probe_schema(true), {{std::int64_t{1}, std::int64_t{9}, 0.0}})));
  EXPECT_FALSE(j.pop_ready().has_value());
  j.close_right();
  auto out = j.pop_ready();
  ASSERT_TRUE(out.has_value());
  EXPECT_EQ(out->value(out->schema().index_of("_matched"), 0), Value(std::int64_t{0}));
}

TEST(KeyRules, Join) {
  auto unique_build = make_schema(EdfSchema({col("key", ValueKind::int64), col("name", ValueKind::utf8)}, {"key"}));
  auto r = key_rules_join(*probe_schema(), *unique_build, on_k());
  EXPECT_EQ(r.primary_key, std::vector<std::string>{"id"});
  auto widened = key_rules_join(*probe_schema(), *build_schema(), on_k());
  EXPECT_EQ(widened.primary_key, (std::vector<std::string>{"id", "line"}));
}

}  // namespace
}  // namespace edf
