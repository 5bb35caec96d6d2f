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
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace edf {

/// Variances of a set of mutable attributes plus the covariance entries that
/// some downstream operator consumes. Pairs are stored with i < j.
struct UncertaintyCell {
  std::vector<double> variance;
  std::map<std::pair<std::size_t, std::size_t>, double> cross;
  bool unstable = false;

  double covariance(std::size_t i, std::size_t j) const;
  Eigen::MatrixXd dense() const;
  /// Keeps the diagonal and every nonzero off-diagonal entry.
  static UncertaintyCell from_dense(const Eigen::MatrixXd& sigma);
};

struct ConfidenceInterval {
  double lo = 0.0;
  double hi = 0.0;
  double level = 0.95;
};

/// Sample variance of the mean, s^2 / n (0 for a single value).
double initial_variance_sum_avg(std::span<const double> sample);

/// Variance of the q-quantile over `resamples` bootstrap resamples drawn with
/// `rng`. Requires at least 2 values and 100 resamples.
double initial_variance_order_stat(std::span<const double> sample, double q, int resamples, std::mt19937_64& rng);

/// Lower q-quantile of an unsorted sample: element floor(q (n − 1)) in sorted order.
double quantile_of(std::vector<double> values, double q);

/// Σ^V = J Σ^U Jᵀ. Throws ValidationError on dimension mismatch.
Eigen::MatrixXd propagate(const Eigen::MatrixXd& jacobian, const Eigen::MatrixXd& sigma);
UncertaintyCell propagate(const Eigen::MatrixXd& jacobian, const UncertaintyCell& sigma);

using VectorFn = std::function<std::vector<double>(std::span<const double>)>;

struct MapJacobian {
  Eigen::MatrixXd jacobian;
  bool unstable = false;
};

/// Central finite-difference Jacobian with per-coordinate step
/// max(1e-6, 1e-6 |u|). Flags the result unstable when forward and backward
/// differences disagree by more than 10% or a derivative is not finite.
MapJacobian finite_difference_jacobian(const VectorFn& f, std::span<const double> point);

UncertaintyCell propagate_map(const VectorFn& f, std::span<const double> point, const UncertaintyCell& sigma);

/// Distinct-count variance through the implicit-function derivatives of the
/// method-of-moments root (Y solves y = Y(1 − h(x̂/Y))).
double var_count_distinct(double Y, double y, double x, double xhat, double var_y, double var_xhat);

/// Chebyshev multiplier for confidence level 1 − delta: k = sqrt(1 / delta).
double chebyshev_k(double delta);

/// [value − kσ, value + kσ].
ConfidenceInterval chebyshev_interval(double value, double variance, double delta);

}  // namespace edf
