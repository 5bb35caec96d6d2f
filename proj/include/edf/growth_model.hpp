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

#include <cstddef>
#include <limits>

namespace edf {

/// Fitted monomial power and the variance of the OLS slope.
struct PowerFit {
  double w = 1.0;
  double var_w = std::numeric_limits<double>::infinity();
  double log_b = 0.0;
  bool fallback = true;
};

/// Streaming least-squares fit of log(mean group cardinality) against log(t).
///
/// Each observation updates running means and co-moments in O(1) time and
/// space. With fewer than two distinct progress values the fit is
/// underdetermined and fit_power() reports w = 1 with an infinite variance.
class GrowthModel {
 public:
  /// Throws DomainError unless 0 < t <= 1 and mean_card > 0.
  void observe(double t, double mean_card);

  PowerFit fit_power() const;

  std::size_t n_obs() const { return n_; }
  bool has_distinct_t() const { return distinct_t_; }

 private:
  std::size_t n_ = 0;
  double mean_lx_ = 0.0;
  double mean_ly_ = 0.0;
  double cxx_ = 0.0;
  double cxy_ = 0.0;
  double cyy_ = 0.0;
  double first_lx_ = 0.0;
  bool distinct_t_ = false;
};

}  // namespace edf
