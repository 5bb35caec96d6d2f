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

#include "edf/growth_model.hpp"

#include <algorithm>
#include <cmath>

#include "edf/error.hpp"

namespace edf {

void GrowthModel::observe(double t, double mean_card) {
  if (!(t > 0.0 && t <= 1.0)) throw DomainError("progress must lie in (0, 1], got " + std::to_string(t));
  if (!(mean_card > 0.0) || !std::isfinite(mean_card)) {
    throw DomainError("mean group cardinality must be positive, got " + std::to_string(mean_card));
  }
  double lx = std::log(t);
  double ly = std::log(mean_card);
  if (n_ == 0) {
    first_lx_ = lx;
  } else if (lx != first_lx_) {
    distinct_t_ = true;
  }
  ++n_;
  // Welford-style co-moment update.
  double n = static_cast<double>(n_);
  double dx = lx - mean_lx_;
  double dy = ly - mean_ly_;
  mean_lx_ += dx / n;
  mean_ly_ += dy / n;
  cxx_ += dx * (lx - mean_lx_);
  cxy_ += dx * (ly - mean_ly_);
  cyy_ += dy * (ly - mean_ly_);
}

PowerFit GrowthModel::fit_power() const {
  PowerFit fit;
  if (!distinct_t_ || !(cxx_ > 0.0)) {
    if (n_ > 0) fit.log_b = mean_ly_ - fit.w * mean_lx_;
    return fit;
  }
  fit.fallback = false;
  fit.w = cxy_ / cxx_;
  fit.log_b = mean_ly_ - fit.w * mean_lx_;
  double rss = std::max(0.0, cyy_ - fit.w * cxy_);
  double dof = std::max(static_cast<double>(n_) - 2.0, 1.0);
  fit.var_w = rss / dof / cxx_;
  return fit;
}

}  // namespace edf
