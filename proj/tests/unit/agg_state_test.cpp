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

#include "edf/agg_state.hpp"
#include "edf/error.hpp"
#include "merge_property.hpp"

namespace edf {
namespace {

using oracle::batch;
using oracle::col;

AggStateMap counts(std::vector<std::pair<std::string, std::int64_t>> kv) {
  AggStateMap m;
  for (auto& [k, n] : kv) m[Key{Value(k)}] = CountState{n};
  return m;
}

TEST(MergeAgg, CountExample) {
  AggregateKind count{AggTag::count};
  auto out = merge_agg(counts({{"IL", 2}, {"MI", 1}}), counts({{"IL", 1}, {"MI", 1}}), count);
  EXPECT_EQ(std::get<CountState>(out.at(Key{Value(std::string("IL"))})).n, 3);
  EXPECT_EQ(std::get<CountState>(out.at(Key{Value(std::string("MI"))})).n, 2);
}

TEST(MergeAgg, EmptyIsIdentity) {
  AggregateKind count{AggTag::count};
  auto acc = counts({{"IL", 2}});
  auto out = merge_agg(acc, {}, count);
  EXPECT_EQ(out.size(), 1u);
  EXPECT_EQ(std::get<CountState>(out.begin()->second).n, 2);
  auto from_empty = merge_agg({}, acc, count);
  EXPECT_EQ(std::get<CountState>(from_empty.begin()->second).n, 2);
}

TEST(MergeAgg, KindMismatchThrows) {
  AggStateMap sums;
  sums[Key{Value(std::int64_t{1})}] = SumState{};
  EXPECT_THROW(merge_agg(counts({{"a", 1}}), sums, AggregateKind{AggTag::count}), ValidationError);
  AggState c = CountState{1};
  EXPECT_THROW(merge_state(c, SumState{}), ValidationError);
}

TEST(MergeAgg, RandomSplitsMatchDirectAggregation) {
  std::mt19937_64 rng(1234);
  for (const auto& mc : oracle::merge_cases()) {
    for (int i = 0; i < 150; ++i) {
      auto err = oracle::check_merge_case(mc, rng);
      ASSERT_TRUE(err.empty()) << err;
    }
  }
}

TEST(MergeAgg, Associative) {
  std::mt19937_64 rng(77);
  auto schema = oracle::merge_schema();
  std::vector<std::size_t> g{schema->index_of("g")};
  for (const auto& mc : oracle::merge_cases()) {
    std::vector<BoundAgg> aggs{BoundAgg::bind(mc.spec, *schema, false)};
    for (int trial = 0; trial < 20; ++trial) {
      auto a = aggregate_batch(oracle::merge_dataset(rng, 30), g, aggs);
      auto b = aggregate_batch(oracle::merge_dataset(rng, 30), g, aggs);
      auto c = aggregate_batch(oracle::merge_dataset(rng, 30), g, aggs);
      AggTable left = a;
      merge_tables(left, b);
      merge_tables(left, c);
      AggTable bc = b;
      merge_tables(bc, c);
      AggTable right = a;
      merge_tables(right, bc);
      ASSERT_EQ(left.size(), right.size());
      for (const auto& [k, s] : left) {
        auto x = raw_value(s.aggs[0], aggs[0]);
        auto y = raw_value(right.at(k).aggs[0], aggs[0]);
        EXPECT_TRUE(oracle::values_match(x, y, mc.exact)) << mc.kind;
      }
    }
  }
}

TEST(AggSpec, NamesAndKinds) {
  EXPECT_EQ(AggSpec::default_output({AggTag::count}, ""), "count");
  EXPECT_EQ(AggSpec::default_output({AggTag::sum}, "qty"), "sum_qty");
  EXPECT_EQ(parse_agg_tag("quantile"), AggTag::order_stat);
  EXPECT_THROW(parse_agg_tag("median"), ValidationError);
  EXPECT_EQ(output_kind({AggTag::min}, ValueKind::utf8), ValueKind::utf8);
  EXPECT_EQ(output_kind({AggTag::avg}, ValueKind::int64), ValueKind::float64);
}

TEST(AggSpec, BindValidates) {
  auto s = make_schema(EdfSchema({col("k", ValueKind::int64), col("name", ValueKind::utf8)}, {"k"}));
  AggSpec sum_text{{AggTag::sum}, "name", "", "x"};
  EXPECT_THROW(BoundAgg::bind(sum_text, *s, false), ValidationError);
  AggSpec missing{{AggTag::max}, "nope", "", "x"};
  EXPECT_THROW(BoundAgg::bind(missing, *s, false), ValidationError);
  AggSpec bad_q{{AggTag::order_stat, 1.5}, "k", "", "x"};
  EXPECT_THROW(BoundAgg::bind(bad_q, *s, false), ValidationError);
  AggSpec text_min{{AggTag::min}, "name", "", "x"};
  EXPECT_NO_THROW(BoundAgg::bind(text_min, *s, false));
}

TEST(DistinctState, JackknifeOverUnits) {
  auto s = make_schema(EdfSchema({col("k", ValueKind::int64), col("v", ValueKind::int64)}, {"k"}));
  AggSpec cd{{AggTag::count_distinct}, "v", "", "cd"};
  std::vector<BoundAgg> aggs{BoundAgg::bind(cd, *s, true)};
  std::vector<std::size_t> none;
  // Units {1,2}, {2,3}, {4,5}: leaving out each unit gives 4, 4, 3 distinct values.
  AggTable t = aggregate_batch(batch(s, {{std::int64_t{0}, std::int64_t{1}}, {std::int64_t{1}, std::int64_t{2}}}), none, aggs);
  merge_tables(t, aggregate_batch(batch(s, {{std::int64_t{2}, std::int64_t{2}}, {std::int64_t{3}, std::int64_t{3}}}), none, aggs));
  merge_tables(t, aggregate_batch(batch(s, {{std::int64_t{4}, std::int64_t{4}}, {std::int64_t{5}, std::int64_t{5}}}),
                                  none, aggs));
  const auto& st = std::get<DistinctState>(t.begin()->second.aggs[0]);
  EXPECT_EQ(distinct_count(st), 5.0);
  double mean = 11.0 / 3.0;
  double expect = 2.0 / 3.0 * ((4 - mean) * (4 - mean) * 2 + (3 - mean) * (3 - mean));
  EXPECT_NEAR(jackknife_variance(st), expect, 1e-12);
}

}  // namespace
}  // namespace edf
