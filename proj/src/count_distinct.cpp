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

#include "edf/count_distinct.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/digamma.hpp>

#include "edf/error.hpp"

namespace edf::mm1 {
namespace {

double digamma(double v) { return boost::math::digamma(v); }

// Returns false where the last gamma argument is non-positive (h == 0 there).
bool in_support(double z, double n, double N) { return N - n - z + 1.0 > 0.0; }

}  // namespace

double h(double z, double n, double N) {
  if (!in_support(z, n, N)) return 0.0;
  double lg = std::lgamma(N - z + 1.0) + std::lgamma(N - n + 1.0) - std::lgamma(N - n - z + 1.0) - std::lgamma(N + 1.0);
  return std::exp(lg);
}

double dh_dz(double z, double n, double N) {
  double hv = h(z, n, N);
  if (hv == 0.0) return 0.0;
  return hv * (digamma(N - n - z + 1.0) - digamma(N - z + 1.0));
}

double dh_dN(double z, double n, double N) {
  double hv = h(z, n, N);
  if (hv == 0.0) return 0.0;
  return hv * (digamma(N - z + 1.0) + digamma(N - n + 1.0) - digamma(N - n - z + 1.0) - digamma(N + 1.0));
}

double residual(double Y, double y, double n, double N) { return y - Y * (1.0 - h(N / Y, n, N)); }

Solution solve(double y, double n, double N) {
  if (!(y >= 0.0) || !(n >= 0.0)) throw DomainError("distinct count inputs must be non-negative");
  if (y > n) throw DomainError("distinct count exceeds the number of rows");
  N = std::max(N, n);
  Solution sol;
  if (y == 0.0) return sol;
  if (y == n) {
    // Every sampled row is distinct; g(N) = n - y = 0 makes N the root.
    sol.Y = N;
    return sol;
  }
  // g(Y) = Y (1 - h(N/Y)) - y is increasing with g(y) <= 0 <= g(N).
  auto g = [&](double Y) { return -residual(Y, y, n, N); };
  double lo = y;
  double hi = N;
  // The absolute tolerance alone is loose for roots far below N.
  const double tol = std::min(1e-9 * N, 1e-10 * y);

  double Y = y * N / n;
  bool converged = false;
  for (int it = 0; it < 100; ++it) {
    ++sol.iterations;
    double gv = g(Y);
    if (gv == 0.0) {
      converged = true;
      break;
    }
    if (gv < 0.0) {
      lo = std::max(lo, Y);
    } else {
      hi = std::min(hi, Y);
    }
    double z = N / Y;
    double slope = (1.0 - h(z, n, N)) + z * dh_dz(z, n, N);
    if (!(slope > 0.0) || !std::isfinite(slope)) break;
    double next = Y - gv / slope;
    if (!(next >= lo && next <= hi)) break;
    double step = std::abs(next - Y);
    Y = next;
    if (step <= tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    sol.used_bisection = true;
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
      double mid = 0.5 * (lo + hi);
      if (g(mid) < 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    Y = 0.5 * (lo + hi);
  }
  sol.Y = Y;
  return sol;
}

Derivatives derivatives(double Y, double y, double n, double N) {
  Derivatives d;
  if (y == 0.0 || Y <= 0.0) return d;
  N = std::max(N, n);
  double z = N / Y;
  double hz = dh_dz(z, n, N);
  double fy = (1.0 - h(z, n, N)) + z * hz;
  if (!(fy > 0.0)) return d;
  d.dY_dy = 1.0 / fy;
  d.dY_dN = (hz + Y * dh_dN(z, n, N)) / fy;
  return d;
}

double variance(double Y, double y, double n, double N, double var_y, double var_N) {
  if (y == 0.0) return 0.0;
  auto d = derivatives(Y, y, n, N);
  double v = 0.0;
  if (var_y > 0.0) v += d.dY_dy * d.dY_dy * var_y;
  if (var_N > 0.0 && d.dY_dN != 0.0) v += d.dY_dN * d.dY_dN * var_N;
  return v;
}

}  // namespace edf::mm1
