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
#include "edf/growth_model.hpp"
#include "oracles.hpp"

namespace edf {
namespace {

TEST(GrowthModel, TwoPointsDefineTheLine) {
  GrowthModel m;
  m.observe(0.5, 5.0);
  m.observe(1.0, 10.0);
  auto fit = m.fit_power();
  EXPECT_FALSE(fit.fallback);
  EXPECT_NEAR(fit.w, 1.0, 1e-12);
}

TEST(GrowthModel, SingleObservationFallsBack) {
  GrowthModel m;
  m.observe(1.0, 7.0);
  auto fit = m.fit_power();
  EXPECT_TRUE(fit.fallback);
  EXPECT_EQ(fit.w, 1.0);
  EXPECT_TRUE(std::isinf(fit.var_w));
  GrowthModel same_t;
  same_t.observe(0.3, 2.0);
  same_t.observe(0.3, 4.0);
  EXPECT_TRUE(same_t.fit_power().fallback);
}

TEST(GrowthModel, RejectsOutOfDomain) {
  GrowthModel m;
  EXPECT_THROW(m.observe(0.0, 1.0), DomainError);
  EXPECT_THROW(m.observe(1.5, 1.0), DomainError);
  EXPECT_THROW(m.observe(0.5, 0.0), DomainError);
  EXPECT_THROW(m.observe(0.5, -2.0), DomainError);
  EXPECT_EQ(m.n_obs(), 0u);
}

TEST(GrowthModel, NoiselessQuadratic) {
  GrowthModel m;
  for (int i = 1; i <= 50; ++i) {
    double t = i / 50.0;
    m.observe(t, 3.0 * t * t);
  }
  auto fit = m.fit_power();
  EXPECT_NEAR(fit.w, 2.0, 1e-9);
  EXPECT_NEAR(fit.var_w, 0.0, 1e-12);
  EXPECT_NEAR(std::exp(fit.log_b), 3.0, 1e-9);
}

TEST(GrowthModel, MatchesBatchLeastSquaresOnNoisyData) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> noise(0.0, 0.3);
  for (int trial = 0; trial < 20; ++trial) {
    GrowthModel m;
    std::vector<std::pair<double, double>> pts;
    int n = 5 + trial * 3;
    for (int i = 1; i <= n; ++i) {
      double t = static_cast<double>(i) / n;
      double card = 4.0 * t * std::exp(noise(rng));
      m.observe(t, card);
      pts.emplace_back(std::log(t), std::log(card));
    }
    auto fit = m.fit_power();
    auto ref = oracle::ols(pts);
    EXPECT_NEAR(fit.w, ref.slope, 1e-12);
    EXPECT_NEAR(fit.log_b, ref.intercept, 1e-12);
    EXPECT_TRUE(oracle::rel_close(fit.var_w, ref.var_slope, 1e-9)) << fit.var_w << " vs " << ref.var_slope;
  }
}

}  // namespace
}  // namespace edf
