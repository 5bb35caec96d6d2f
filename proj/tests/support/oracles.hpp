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

// Independent reference computations used by the tests. Nothing here calls
// into the engine's arithmetic; the helpers only build inputs.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "edf/row_batch.hpp"
#include "edf/schema.hpp"
#include "edf/value.hpp"

namespace edf::oracle {

inline AttributeDef col(std::string name, ValueKind kind, Mutability m = Mutability::constant) {
  return {std::move(name), kind, m};
}

inline RowBatch batch(SchemaPtr schema, const std::vector<std::vector<Value>>& rows) {
  BatchBuilder b(std::move(schema));
  for (const auto& r : rows) b.add_row(r);
  return std::move(b).finish();
}

inline std::vector<std::vector<Value>> rows_of(const RowBatch& b) {
  std::vector<std::vector<Value>> out(b.row_count());
  for (std::size_t r = 0; r < b.row_count(); ++r) {
    for (std::size_t c = 0; c < b.column_count(); ++c) out[r].push_back(b.value(c, r));
  }
  return out;
}

inline std::multiset<std::vector<Value>> row_set(const RowBatch& b) {
  auto rows = rows_of(b);
  return {rows.begin(), rows.end()};
}

struct Line {
  double slope = 0.0;
  double intercept = 0.0;
  double var_slope = 0.0;
};

/// Textbook two-pass least squares in long double.
inline Line ols(const std::vector<std::pair<double, double>>& pts) {
  long double n = static_cast<long double>(pts.size());
  long double mx = 0, my = 0;
  for (auto [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  long double sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  Line l;
  long double b = sxy / sxx;
  l.slope = static_cast<double>(b);
  l.intercept = static_cast<double>(my - b * mx);
  long double rss = 0;
  for (auto [x, y] : pts) {
    long double e = y - (my + b * (x - mx));
    rss += e * e;
  }
  l.var_slope = pts.size() > 2 ? static_cast<double>(rss / (n - 2) / sxx) : 0.0;
  return l;
}

/// Σ_k Σ_l J(i,k) S(k,l) J(j,l), summed term by term.
inline Eigen::MatrixXd triple_sum(const Eigen::MatrixXd& J, const Eigen::MatrixXd& S) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(J.rows(), J.rows());
  for (Eigen::Index i = 0; i < J.rows(); ++i) {
    for (Eigen::Index j = 0; j < J.rows(); ++j) {
      long double acc = 0;
      for (Eigen::Index k = 0; k < S.rows(); ++k) {
        for (Eigen::Index l = 0; l < S.cols(); ++l) acc += static_cast<long double>(S(k, l)) * J(i, k) * J(j, l);
      }
      out(i, j) = static_cast<double>(acc);
    }
  }
  return out;
}

/// Finite-population term of the method-of-moments distinct estimator, in
/// extended precision: near Y = N the root is badly conditioned in double.
inline long double mm1_h_wide(long double z, long double n, long double N) {
  if (N - n - z + 1.0L <= 0.0L) return 0.0L;
  return std::exp(std::lgamma(N - z + 1.0L) + std::lgamma(N - n + 1.0L) - std::lgamma(N - n - z + 1.0L) -
                  std::lgamma(N + 1.0L));
}

inline double mm1_h(double z, double n, double N) { return static_cast<double>(mm1_h_wide(z, n, N)); }

/// Root of Y (1 − h(N / Y)) = y on [y, N] by plain bisection.
inline double mm1_bisect(double y, double n, double N, int steps = 200) {
  if (y == 0.0) return 0.0;
  auto g = [&](long double Y) { return Y * (1.0L - mm1_h_wide(N / Y, n, N)) - y; };
  long double lo = y;
  long double hi = N;
  if (g(lo) >= 0.0L) return y;
  for (int i = 0; i < steps; ++i) {
    long double mid = 0.5L * (lo + hi);
    (g(mid) < 0.0L ? lo : hi) = mid;
  }
  return static_cast<double>(0.5L * (lo + hi));
}

/// Central difference with a relative step.
inline double derivative(const std::function<double(double)>& f, double x, double rel = 1e-5) {
  double h = std::max(1e-7, rel * std::abs(x));
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Correctly rounded sum of doubles whose exponents span well under 60 bits.
inline double wide_sum(const std::vector<double>& v) {
  __float128 s = 0;
  for (double x : v) s += static_cast<__float128>(x);
  return static_cast<double>(s);
}

inline double mean(const std::vector<double>& v) {
  long double s = 0;
  for (double x : v) s += x;
  return static_cast<double>(s / static_cast<long double>(v.size()));
}

inline double sample_variance(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  long double m = mean(v);
  long double ss = 0;
  for (double x : v) ss += (x - m) * (x - m);
  return static_cast<double>(ss / static_cast<long double>(v.size() - 1));
}

/// Element floor(q (n − 1)) of the sorted values.
template <typename T>
T lower_quantile(std::vector<T> v, double q) {
  std::sort(v.begin(), v.end());
  return v[static_cast<std::size_t>(std::floor(q * static_cast<double>(v.size() - 1)))];
}

inline bool rel_close(double a, double b, double rel) {
  if (a == b) return true;
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

/// Inner or left join of row lists by nested loops. Output rows are probe
/// columns then build columns minus `build_key`, plus a match flag for left
/// joins with typed defaults for missing build values.
inline std::multiset<std::vector<Value>> nested_loop_join(const RowBatch& probe, const RowBatch& build,
                                                          std::size_t probe_key, std::size_t build_key, bool left) {
  std::multiset<std::vector<Value>> out;
  auto prow = rows_of(probe);
  auto brow = rows_of(build);
  for (const auto& p : prow) {
    bool matched = false;
    for (const auto& b : brow) {
      if (p[probe_key] != b[build_key]) continue;
      matched = true;
      auto r = p;
      for (std::size_t c = 0; c < b.size(); ++c) {
        if (c != build_key) r.push_back(b[c]);
      }
      if (left) r.emplace_back(std::int64_t{1});
      out.insert(r);
    }
    if (left && !matched) {
      auto r = p;
      for (std::size_t c = 0; c < build.column_count(); ++c) {
        if (c == build_key) continue;
        switch (build.schema().at(c).kind) {
          case ValueKind::int64:
            r.emplace_back(std::int64_t{0});
            break;
          case ValueKind::float64:
            r.emplace_back(0.0);
            break;
          case ValueKind::utf8:
            r.emplace_back(std::string());
            break;
        }
      }
      r.emplace_back(std::int64_t{0});
      out.insert(r);
    }
  }
  return out;
}

}  // namespace edf::oracle
