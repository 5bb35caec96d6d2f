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

#include "edf/estimators.hpp"

#include <cmath>

#include "edf/confidence.hpp"
#include "edf/count_distinct.hpp"
#include "edf/error.hpp"

namespace edf {

CardinalityEstimate estimate_final_cardinality(const GroupObservation& obs, double w, double var_w) {
  if (!(obs.t > 0.0 && obs.t <= 1.0)) throw DomainError("progress must lie in (0, 1]");
  CardinalityEstimate c;
  if (obs.t == 1.0) {
    c.xhat = obs.x_it;
    return c;
  }
  c.xhat = obs.x_it / std::pow(obs.t, w);
  double l = c.xhat * std::log(1.0 / obs.t);
  c.var_xhat = var_w == 0.0 ? 0.0 : l * l * var_w;
  return c;
}

EstimateCell estimate_count(const CardinalityEstimate& card) { return {card.xhat, card.var_xhat}; }

EstimateCell estimate_sum(double y, double x, const CardinalityEstimate& card, double var_y) {
  if (!(x > 0.0)) throw DomainError("sum estimate needs at least one row");
  // y * (x̂ / x) rather than (y / x) * x̂: the ratio is exactly 1 at t = 1.
  double value = y * (card.xhat / x);
  double var = 0.0;
  if (var_y > 0.0) var += var_y * card.xhat * card.xhat;
  if (card.var_xhat > 0.0) var += card.var_xhat * y * y;
  return {value, var / (x * x)};
}

EstimateCell estimate_weighted_avg(double y_num, double y_den, double /*x*/, const CardinalityEstimate& /*card*/,
                                   const Cov2& cov) {
  if (y_den == 0.0) throw DomainError("weighted average with zero denominator");
  double value = y_num / y_den;
  double ja = 1.0 / y_den;
  double jb = -y_num / (y_den * y_den);
  double var = ja * ja * cov[0][0] + 2.0 * ja * jb * cov[0][1] + jb * jb * cov[1][1];
  return {value, std::max(0.0, var)};
}

EstimateCell estimate_count_distinct(double y, double x, const CardinalityEstimate& card, double var_y) {
  if (y > x) throw DomainError("distinct count exceeds group cardinality");
  if (y == 0.0) return {0.0, 0.0};
  auto sol = mm1::solve(y, x, card.xhat);
  double var = var_count_distinct(sol.Y, y, x, card.xhat, var_y, card.var_xhat);
  return {sol.Y, var};
}

EstimateCell estimate_order_stat(const Value& latest, double variance) { return {latest, variance}; }

}  // namespace edf
