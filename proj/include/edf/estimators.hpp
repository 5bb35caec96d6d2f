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

#include <array>
#include <cstdint>

#include "edf/value.hpp"

namespace edf {

/// Estimated final cardinality of one group and its variance.
struct CardinalityEstimate {
  double xhat = 0.0;
  double var_xhat = 0.0;
};

/// One extrinsic cell: the estimate and its variance.
struct EstimateCell {
  Value value;
  double variance = 0.0;
};

struct GroupObservation {
  double x_it = 0.0;  ///< rows aggregated into the group so far
  double t = 1.0;     ///< progress, 0 < t <= 1
};

/// x̂ = x / t^w with Var(x̂) = (x̂ ln(1/t))^2 Var(w); exact at t = 1.
CardinalityEstimate estimate_final_cardinality(const GroupObservation& obs, double w, double var_w);

EstimateCell estimate_count(const CardinalityEstimate& card);

/// Scales a raw sum by x̂ / x. `var_y` is the variance of the raw sum.
EstimateCell estimate_sum(double y, double x, const CardinalityEstimate& card, double var_y);

/// 2x2 covariance of (numerator, denominator) raw sums.
using Cov2 = std::array<std::array<double, 2>, 2>;

/// Weighted average y_num / y_den; growth scaling cancels. Throws DomainError
/// when y_den == 0.
EstimateCell estimate_weighted_avg(double y_num, double y_den, double x, const CardinalityEstimate& card,
                                   const Cov2& cov);

/// Finite-population method-of-moments distinct count. `var_y` is the
/// variance of the observed distinct count.
EstimateCell estimate_count_distinct(double y, double x, const CardinalityEstimate& card, double var_y = 0.0);

/// Order statistics report the latest observed value.
EstimateCell estimate_order_stat(const Value& latest, double variance = 0.0);

}  // namespace edf
