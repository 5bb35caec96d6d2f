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
#include "edf/state.hpp"
#include "oracles.hpp"

namespace edf {
namespace {

using oracle::batch;
using oracle::col;

SchemaPtr people() {
  return make_schema(EdfSchema({col("name", ValueKind::utf8), col("n", ValueKind::int64)}, {"name"}));
}

Partial partial(std::vector<std::vector<Value>> rows) {
  return Partial::from_batch(std::make_shared<const RowBatch>(batch(people(), rows)));
}

TEST(IntrinsicState, LatestStateConcatenatesPartials) {
  IntrinsicState s(people());
  s.append_partial(partial({{std::string("mike"), std::int64_t{4}}}));
  s.append_partial(partial({{std::string("sarah"), std::int64_t{2}}}));
  auto rows = oracle::rows_of(s.latest_state());
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], (std::vector<Value>{std::string("mike"), std::int64_t{4}}));
  EXPECT_EQ(rows[1], (std::vector<Value>{std::string("sarah"), std::int64_t{2}}));
  EXPECT_EQ(s.latest_version().partials.size(), 2u);
}

TEST(IntrinsicState, EmptyPartialGivesEmptyState) {
  IntrinsicState s(people());
  s.append_partial(partial({}));
  EXPECT_EQ(s.latest_state().row_count(), 0u);
}

TEST(IntrinsicState, LatestVersionWins) {
  IntrinsicState s(people());
  s.append_partial(partial({{std::string("b"), std::int64_t{1}}}));
  Version v;
  v.partials.push_back(partial({{std::string("a"), std::int64_t{9}}}));
  s.push_version(v);
  auto rows = oracle::rows_of(s.latest_state());
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0][0], Value(std::string("a")));
  EXPECT_EQ(s.version_count(), 2u);
}

TEST(IntrinsicState, AppendOverlappingKeyThrows) {
  IntrinsicState s(people());
  s.append_partial(partial({{std::string("a"), std::int64_t{1}}}));
  EXPECT_THROW(s.append_partial(partial({{std::string("a"), std::int64_t{2}}})), KeyOverlapError);
  // The failed append leaves the state untouched.
  EXPECT_EQ(s.latest_state().row_count(), 1u);
}

TEST(IntrinsicState, AppendToEmptyVersion) {
  IntrinsicState s(people());
  s.push_version(Version{});
  s.append_partial(partial({{std::string("x"), std::int64_t{1}}, {std::string("y"), std::int64_t{2}}}));
  EXPECT_EQ(s.latest_version().partials.size(), 1u);
  EXPECT_EQ(s.latest_state().row_count(), 2u);
}

TEST(IntrinsicState, PushEmptyVersionClears) {
  IntrinsicState s(people());
  s.append_partial(partial({{std::string("x"), std::int64_t{1}}}));
  s.push_version(Version{});
  EXPECT_EQ(s.latest_state().row_count(), 0u);
}

TEST(IntrinsicState, PushThenAppendLandsInNewestVersion) {
  IntrinsicState s(people());
  s.append_partial(partial({{std::string("old"), std::int64_t{1}}}));
  Version v;
  v.partials.push_back(partial({{std::string("a"), std::int64_t{1}}}));
  s.push_version(v);
  s.append_partial(partial({{std::string("old"), std::int64_t{2}}}));
  EXPECT_EQ(s.latest_state().row_count(), 2u);
  EXPECT_EQ(s.latest_version().partials.size(), 2u);
}

TEST(IntrinsicState, NoVersionThrows) {
  IntrinsicState s(people());
  EXPECT_FALSE(s.has_version());
  EXPECT_THROW(s.latest_state(), EmptyStateError);
}

TEST(IntrinsicState, OverlappingVersionRejected) {
  Version v;
  v.partials.push_back(partial({{std::string("a"), std::int64_t{1}}}));
  v.partials.push_back(partial({{std::string("a"), std::int64_t{2}}}));
  EXPECT_THROW(v.check_disjoint(), KeyOverlapError);
  IntrinsicState s(people());
  EXPECT_THROW(s.push_version(v), KeyOverlapError);
}

TEST(IntrinsicState, EarlierSnapshotsAreUnaffected) {
  IntrinsicState s(people());
  s.append_partial(partial({{std::string("a"), std::int64_t{1}}}));
  auto before = s.latest_state();
  s.append_partial(partial({{std::string("b"), std::int64_t{2}}}));
  EXPECT_EQ(before.row_count(), 1u);
}

TEST(IntrinsicState, DuplicateKeyInsidePartialThrows) {
  EXPECT_THROW(partial({{std::string("a"), std::int64_t{1}}, {std::string("a"), std::int64_t{2}}}),
               KeyOverlapError);
}

TEST(Progress, IsFinal) {
  EXPECT_TRUE(is_final(1.0));
  EXPECT_FALSE(is_final(0.999));
  EXPECT_FALSE(is_final(0.0));
  EXPECT_TRUE(is_final(Progress{10, 10}));
  EXPECT_FALSE(is_final(Progress{9, 10}));
  EXPECT_DOUBLE_EQ((Progress{3, 10}).t(), 0.3);
  EXPECT_EQ((Progress{0, 0}).t(), 1.0);
  EXPECT_EQ((Progress{7, 7}).t(), 1.0);
}

}  // namespace
}  // namespace edf
