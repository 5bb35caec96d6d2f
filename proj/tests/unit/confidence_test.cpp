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

#include "edf/confidence.hpp"
#include "edf/error.hpp"
#include "oracles.hpp"

namespace edf {
namespace {

TEST(InitialVariance, SumAvg) {
  std::vector<double> constant{4, 4, 4};
  EXPECT_EQ(initial_variance_sum_avg(constant), 0.0);
  std::vector<double> two{0, 2};
  EXPECT_DOUBLE_EQ(initial_variance_sum_avg(two), 1.0);
  std::vector<double> one{5};
  EXPECT_EQ(initial_variance_sum_avg(one), 0.0);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> d(3.0, 2.0);
  std::vector<double> s(40);
  for (auto& v : s) v = d(rng);
  EXPECT_NEAR(initial_variance_sum_avg(s), oracle::sample_variance(s) / 40.0, 1e-12);
}

TEST(InitialVariance, BootstrapQuantile) {
  std::mt19937_64 a(9), b(9);
  std::vector<double> constant(10, 1.5);
  EXPECT_EQ(initial_variance_order_stat(constant, 0.5, 100, a), 0.0);
  std::vector<double> s{1, 5, 2, 8, 3, 9, 4};
  EXPECT_EQ(initial_variance_order_stat(s, 0.5, 200, a), initial_variance_order_stat(s, 0.5, 200, b));
  std::vector<double> single{1.0};
  EXPECT_THROW(initial_variance_order_stat(single, 0.5, 100, a), ValidationError);
  EXPECT_THROW(initial_variance_order_stat(s, 0.5, 50, a), ValidationError);
}

TEST(InitialVariance, BootstrapMedianNearAsymptotic) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<double> s(1000);
  for (auto& v : s) v = d(rng);
  double var = initial_variance_order_stat(s, 0.5, 400, rng);
  // q(1 − q) / (n f(x_q)^2) with the standard normal density at the median.
  double f = 1.0 / std::sqrt(2.0 * M_PI);
  double asym = 0.25 / (1000.0 * f * f);
  EXPECT_GT(var, asym / 3.0);
  EXPECT_LT(var, asym * 3.0);
}

TEST(Quantile, LowerDefinition) {
  EXPECT_EQ(quantile_of({4, 1, 3, 2}, 0.5), 2.0);
  EXPECT_EQ(quantile_of({4, 1, 3, 2}, 1.0), 4.0);
  EXPECT_EQ(quantile_of({4, 1, 3, 2}, 0.0), 1.0);
  EXPECT_THROW(quantile_of({}, 0.5), ValidationError);
}

TEST(Propagate, SmallCases) {
  Eigen::MatrixXd s(2, 2);
  s << 2, 0.5, 0.5, 3;
  EXPECT_TRUE(propagate(Eigen::MatrixXd::Identity(2, 2), s).isApprox(s));
  Eigen::MatrixXd j(1, 1);
  j << 2;
  Eigen::MatrixXd v(1, 1);
  v << 3;
  EXPECT_DOUBLE_EQ(propagate(j, v)(0, 0), 12.0);
  EXPECT_THROW(propagate(Eigen::MatrixXd::Identity(3, 3), s), ValidationError);
}

TEST(Propagate, MatchesTripleSum) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    int m = 1 + static_cast<int>(rng() % 5), k = 1 + static_cast<int>(rng() % 5);
    Eigen::MatrixXd J(m, k), A(k, k);
    for (int i = 0; i < m; ++i)
      for (int c = 0; c < k; ++c) J(i, c) = u(rng);
    for (int i = 0; i < k; ++i)
      for (int c = 0; c < k; ++c) A(i, c) = u(rng);
    Eigen::MatrixXd S = A * A.transpose();
    auto got = propagate(J, S);
    auto ref = oracle::triple_sum(J, S);
    for (int i = 0; i < m; ++i)
      for (int c = 0; c < m; ++c) EXPECT_NEAR(got(i, c), ref(i, c), 1e-12 * std::max(1.0, std::abs(ref(i, c))));
  }
}

TEST(Propagate, BlockDiagonalSplits) {
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(4, 4);
  S.block(0, 0, 2, 2) << 2, 1, 1, 3;
  S.block(2, 2, 2, 2) << 5, -1, -1, 4;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2, 4);
  J.block(0, 0, 1, 2) << 1.5, -2;
  J.block(1, 2, 1, 2) << 0.5, 3;
  auto whole = propagate(J, S);
  auto top = propagate(J.block(0, 0, 1, 2), S.block(0, 0, 2, 2));
  auto bottom = propagate(J.block(1, 2, 1, 2), S.block(2, 2, 2, 2));
  EXPECT_NEAR(whole(0, 0), top(0, 0), 1e-12);
  EXPECT_NEAR(whole(1, 1), bottom(0, 0), 1e-12);
  EXPECT_NEAR(whole(0, 1), 0.0, 1e-12);
}

TEST(Propagate, SparseCellRoundTrip) {
  UncertaintyCell c;
  c.variance = {1.0, 2.0, 3.0};
  c.cross[{0, 2}] = 0.5;
  EXPECT_EQ(c.covariance(2, 0), 0.5);
  EXPECT_EQ(c.covariance(0, 1), 0.0);
  auto back = UncertaintyCell::from_dense(c.dense());
  EXPECT_EQ(back.variance, c.variance);
  EXPECT_EQ(back.cross, c.cross);
}

TEST(PropagateMap, Examples) {
  UncertaintyCell one;
  one.variance = {1.0};
  std::vector<double> at3{3.0};
  auto shifted = propagate_map([](std::span<const double> u) { return std::vector<double>{u[0] + 7.0}; }, at3, one);
  EXPECT_NEAR(shifted.variance[0], 1.0, 1e-6);
  EXPECT_FALSE(shifted.unstable);
  auto squared = propagate_map([](std::span<const double> u) { return std::vector<double>{u[0] * u[0]}; }, at3, one);
  EXPECT_NEAR(squared.variance[0], 36.0, 1e-6);
  EXPECT_FALSE(squared.unstable);
  std::vector<double> at0{0.0};
  auto kink = propagate_map([](std::span<const double> u) { return std::vector<double>{std::abs(u[0])}; }, at0, one);
  EXPECT_TRUE(kink.unstable);
  auto pole = propagate_map([](std::span<const double> u) { return std::vector<double>{1.0 / u[0]}; }, at0, one);
  EXPECT_TRUE(pole.unstable);
}

TEST(Chebyshev, Multiplier) {
  EXPECT_NEAR(chebyshev_k(0.05), 4.4721359549995796, 1e-12);
  EXPECT_DOUBLE_EQ(chebyshev_k(0.25), 2.0);
  auto ci = chebyshev_interval(3.0, 0.0, 0.05);
  EXPECT_EQ(ci.lo, 3.0);
  EXPECT_EQ(ci.hi, 3.0);
  auto w = chebyshev_interval(10.0, 4.0, 0.25);
  EXPECT_DOUBLE_EQ(w.lo, 6.0);
  EXPECT_DOUBLE_EQ(w.hi, 14.0);
  EXPECT_DOUBLE_EQ(w.level, 0.75);
  EXPECT_THROW(chebyshev_k(0.0), ValidationError);
  EXPECT_THROW(chebyshev_interval(1.0, -1.0, 0.05), ValidationError);
}

}  // namespace
}  // namespace edf
