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

namespace edf::mm1 {

/// Haas-Naughton-Seshadri-Stokes finite-population term
///   h(z) = Γ(N−z+1) Γ(N−n+1) / (Γ(N−n−z+1) Γ(N+1))
/// for a sample of n rows out of N. Evaluated in log-gamma space. h is 0
/// where N−n−z+1 <= 0 (a class of z rows cannot be missed entirely).
double h(double z, double n, double N);

/// dh/dz at fixed (n, N).
double dh_dz(double z, double n, double N);

/// ∂h/∂N at fixed (z, n).
double dh_dN(double z, double n, double N);

struct Solution {
  double Y = 0.0;
  int iterations = 0;
  bool used_bisection = false;
};

/// Solves y = Y (1 − h(N / Y)) for Y in [y, N] by Newton-Raphson from
/// Y0 = y N / n, stopping when the step is below min(1e-9 N, 1e-10 y) (at most 100 steps).
/// Falls back to bisection when an iterate leaves the bracket.
///
/// Requires 0 <= y <= n; N is raised to n if smaller. y = 0 yields 0.
Solution solve(double y, double n, double N);

/// Residual y − Y (1 − h(N / Y)).
double residual(double Y, double y, double n, double N);

struct Derivatives {
  double dY_dy = 0.0;
  double dY_dN = 0.0;
};

/// Implicit derivatives of the root Y with respect to y and N.
Derivatives derivatives(double Y, double y, double n, double N);

/// Var(Y) = (∂Y/∂y)^2 Var(y) + (∂Y/∂N)^2 Var(N).
double variance(double Y, double y, double n, double N, double var_y, double var_N);

}  // namespace edf::mm1
