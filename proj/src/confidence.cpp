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

#include "edf/confidence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "edf/count_distinct.hpp"
#include "edf/error.hpp"

namespace edf {

double UncertaintyCell::covariance(std::size_t i, std::size_t j) const {
  if (i == j) return variance.at(i);
  auto it = cross.find({std::min(i, j), std::max(i, j)});
  return it == cross.end() ? 0.0 : it->second;
}

Eigen::MatrixXd UncertaintyCell::dense() const {
  auto n = static_cast<Eigen::Index>(variance.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = variance[static_cast<std::size_t>(i)];
  for (const auto& [ij, c] : cross) {
    auto i = static_cast<Eigen::Index>(ij.first);
    auto j = static_cast<Eigen::Index>(ij.second);
    if (i >= n || j >= n) throw ValidationError("covariance entry outside the cell");
    m(i, j) = c;
    m(j, i) = c;
  }
  return m;
}

UncertaintyCell UncertaintyCell::from_dense(const Eigen::MatrixXd& sigma) {
  if (sigma.rows() != sigma.cols()) throw ValidationError("covariance matrix is not square");
  UncertaintyCell c;
  auto n = static_cast<std::size_t>(sigma.rows());
  c.variance.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    c.variance[i] = sigma(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
    for (std::size_t j = i + 1; j < n; ++j) {
      double v = sigma(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (v != 0.0) c.cross[{i, j}] = v;
    }
  }
  return c;
}

double initial_variance_sum_avg(std::span<const double> sample) {
  if (sample.empty()) throw ValidationError("empty sample");
  if (sample.size() < 2) return 0.0;
  double n = static_cast<double>(sample.size());
  double mean = 0.0;
  for (double v : sample) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : sample) ss += (v - mean) * (v - mean);
  return ss / (n - 1.0) / n;
}

double quantile_of(std::vector<double> values, double q) {
  if (values.empty()) throw ValidationError("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw ValidationError("quantile outside [0, 1]");
  auto pos = static_cast<std::size_t>(std::floor(q * static_cast<double>(values.size() - 1)));
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(pos), values.end());
  return values[pos];
}

double initial_variance_order_stat(std::span<const double> sample, double q, int resamples, std::mt19937_64& rng) {
  if (sample.size() < 2) throw ValidationError("bootstrap needs at least two values");
  if (resamples < 100) throw ValidationError("bootstrap needs at least 100 resamples");
  if (std::all_of(sample.begin(), sample.end(), [&](double v) { return v == sample.front(); })) return 0.0;
  std::uniform_int_distribution<std::size_t> pick(0, sample.size() - 1);
  std::vector<double> draw(sample.size());
  double mean = 0.0;
  double m2 = 0.0;
  for (int b = 0; b < resamples; ++b) {
    for (auto& d : draw) d = sample[pick(rng)];
    double v = quantile_of(draw, q);
    double delta = v - mean;
    mean += delta / (b + 1);
    m2 += delta * (v - mean);
  }
  return m2 / (resamples - 1);
}

Eigen::MatrixXd propagate(const Eigen::MatrixXd& jacobian, const Eigen::MatrixXd& sigma) {
  if (sigma.rows() != sigma.cols() || jacobian.cols() != sigma.rows()) {
    throw ValidationError("propagate: J is " + std::to_string(jacobian.rows()) + "x" +
                          std::to_string(jacobian.cols()) + ", sigma is " + std::to_string(sigma.rows()) + "x" +
                          std::to_string(sigma.cols()));
  }
  return jacobian * sigma * jacobian.transpose();
}

UncertaintyCell propagate(const Eigen::MatrixXd& jacobian, const UncertaintyCell& sigma) {
  auto out = UncertaintyCell::from_dense(propagate(jacobian, sigma.dense()));
  out.unstable = sigma.unstable;
  return out;
}

MapJacobian finite_difference_jacobian(const VectorFn& f, std::span<const double> point) {
  std::vector<double> u(point.begin(), point.end());
  auto f0 = f(u);
  MapJacobian out;
  out.jacobian = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(f0.size()), static_cast<Eigen::Index>(u.size()));
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  for (std::size_t k = 0; k < u.size(); ++k) {
    double step = std::max(1e-6, 1e-6 * std::abs(u[k]));
    double saved = u[k];
    u[k] = saved + step;
    auto fp = f(u);
    u[k] = saved - step;
    auto fm = f(u);
    u[k] = saved;
    if (fp.size() != f0.size() || fm.size() != f0.size()) throw ValidationError("map changed its output arity");
    for (std::size_t i = 0; i < f0.size(); ++i) {
      double fwd = (fp[i] - f0[i]) / step;
      double bwd = (f0[i] - fm[i]) / step;
      double central = (fp[i] - fm[i]) / (2.0 * step);
      // Rounding noise in a one-sided difference is about eps |f| / step.
      double slack = 64.0 * kEps * (1.0 + std::abs(f0[i])) / step;
      if (!std::isfinite(central) || !std::isfinite(fwd) || !std::isfinite(bwd) ||
          std::abs(fwd - bwd) > 0.1 * std::max(std::abs(fwd), std::abs(bwd)) + slack) {
        out.unstable = true;
      }
      out.jacobian(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          std::isfinite(central) ? central : 0.0;
    }
  }
  return out;
}

UncertaintyCell propagate_map(const VectorFn& f, std::span<const double> point, const UncertaintyCell& sigma) {
  if (sigma.variance.size() != point.size()) throw ValidationError("propagate_map: sigma does not match the point");
  auto j = finite_difference_jacobian(f, point);
  auto out = propagate(j.jacobian, sigma);
  out.unstable = out.unstable || j.unstable;
  return out;
}

double var_count_distinct(double Y, double y, double x, double xhat, double var_y, double var_xhat) {
  return mm1::variance(Y, y, x, xhat, var_y, var_xhat);
}

double chebyshev_k(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("delta must lie in (0, 1)");
  return std::sqrt(1.0 / delta);
}

ConfidenceInterval chebyshev_interval(double value, double variance, double delta) {
  if (variance < 0.0) throw ValidationError("negative variance");
  double k = chebyshev_k(delta);
  double half = variance == 0.0 ? 0.0 : k * std::sqrt(variance);
  return {value - half, value + half, 1.0 - delta};
}

}  // namespace edf
