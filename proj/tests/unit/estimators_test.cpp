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

#include <cmath>
#include <random>

#include "edf/error.hpp"
#include "edf/estimators.hpp"
#include "oracles.hpp"

namespace edf {
namespace {

double num(const EstimateCell& c) { return std::get<double>(c.value); }

TEST(FinalCardinality, Examples) {
  EXPECT_DOUBLE_EQ(estimate_final_cardinality({2.0, 0.1}, 1.0, 0.0).xhat, 20.0);
  EXPECT_DOUBLE_EQ(estimate_final_cardinality({7.0, 0.3}, 0.0, 0.0).xhat, 7.0);
  EXPECT_DOUBLE_EQ(estimate_final_cardinality({50.0, 0.5}, 1.0, 0.0).xhat, 100.0);
  auto exact = estimate_final_cardinality({13.0, 1.0}, 1.7, 5.0);
  EXPECT_EQ(exact.xhat, 13.0);
  EXPECT_EQ(exact.var_xhat, 0.0);
  EXPECT_THROW(estimate_final_cardinality({1.0, 0.0}, 1.0, 0.0), DomainError);
}

TEST(FinalCardinality, VarianceFormula) {
  auto c = estimate_final_cardinality({10.0, 0.25}, 1.0, 0.04);
  double l = 40.0 * std::log(4.0);
  EXPECT_NEAR(c.var_xhat, l * l * 0.04, 1e-9);
  // Never below the observed count when w >= 0.
  for (double w : {0.0, 0.5, 1.0, 3.0}) EXPECT_GE(estimate_final_cardinality({3.0, 0.4}, w, 0.0).xhat, 3.0);
}

TEST(Count, PassThrough) {
  auto c = estimate_count({100.0, 48.05});
  EXPECT_EQ(num(c), 100.0);
  EXPECT_EQ(c.variance, 48.05);
}

TEST(Sum, Examples) {
  EXPECT_DOUBLE_EQ(num(estimate_sum(30.0, 3.0, {30.0, 0.0}, 0.0)), 300.0);
  // At completion the ratio is exactly one.
  for (double y : {0.1, 1e-7, 12345.678}) EXPECT_EQ(num(estimate_sum(y, 7.0, {7.0, 0.0}, 0.0)), y);
  EXPECT_THROW(estimate_sum(1.0, 0.0, {1.0, 0.0}, 0.0), DomainError);
}

TEST(Sum, VarianceMatchesFiniteDifferencePropagation) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.5, 50.0);
  for (int i = 0; i < 100; ++i) {
    double y = u(rng), x = std::floor(u(rng)) + 1.0, xhat = x * (1.0 + u(rng));
    double vy = u(rng), vx = u(rng);
    auto cell = estimate_sum(y, x, {xhat, vx}, vy);
    auto f_y = [&](double yy) { return yy / x * xhat; };
    auto f_x = [&](double xx) { return y / x * xx; };
    double dy = oracle::derivative(f_y, y), dx = oracle::derivative(f_x, xhat);
    EXPECT_TRUE(oracle::rel_close(cell.variance, dy * dy * vy + dx * dx * vx, 1e-6));
  }
}

TEST(WeightedAvg, CancellationAndVariance) {
  Cov2 zero{};
  auto c = estimate_weighted_avg(10.0, 5.0, 3.0, {100.0, 7.0}, zero);
  EXPECT_EQ(num(c), 2.0);
  EXPECT_EQ(c.variance, 0.0);
  EXPECT_THROW(estimate_weighted_avg(1.0, 0.0, 1.0, {1.0, 0.0}, zero), DomainError);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(1.0, 20.0);
  for (int i = 0; i < 100; ++i) {
    double a = u(rng), b = u(rng), va = u(rng), vb = u(rng);
    double cov = 0.5 * std::sqrt(va * vb) * (u(rng) > 10 ? 1 : -1);
    Cov2 s{{{va, cov}, {cov, vb}}};
    auto cell = estimate_weighted_avg(a, b, 1.0, {1.0, 0.0}, s);
    double ja = oracle::derivative([&](double v) { return v / b; }, a);
    double jb = oracle::derivative([&](double v) { return a / v; }, b);
    double expect = ja * ja * va + 2 * ja * jb * cov + jb * jb * vb;
    EXPECT_TRUE(oracle::rel_close(cell.variance, expect, 1e-6)) << cell.variance << " vs " << expect;
  }
}

TEST(CountDistinct, Edges) {
  auto zero = estimate_count_distinct(0.0, 10.0, {100.0, 5.0});
  EXPECT_EQ(num(zero), 0.0);
  EXPECT_EQ(zero.variance, 0.0);
  EXPECT_THROW(estimate_count_distinct(11.0, 10.0, {100.0, 0.0}), DomainError);
  // All data seen: the observed distinct count is the root.
  for (double y : {1.0, 5.0, 37.0, 80.0}) EXPECT_NEAR(num(estimate_count_distinct(y, 80.0, {80.0, 0.0})), y, 1e-6 * y);
}

TEST(CountDistinct, MatchesBisection) {
  auto c = estimate_count_distinct(50.0, 100.0, {1000.0, 0.0});
  double ref = oracle::mm1_bisect(50.0, 100.0, 1000.0);
  EXPECT_TRUE(oracle::rel_close(num(c), ref, 1e-6)) << num(c) << " vs " << ref;
}

TEST(OrderStat, ReportsLatest) {
  auto c = estimate_order_stat(Value(std::int64_t{3}), 0.25);
  EXPECT_EQ(c.value, Value(std::int64_t{3}));
  EXPECT_EQ(c.variance, 0.25);
}

}  // namespace
}  // namespace edf
