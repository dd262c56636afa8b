// Copyright 2026 glmrate developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

namespace glmrate {

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
/// Series for x < a + 1, continued fraction otherwise.
double regularized_gamma_q(double a, double x);

/// P(X > x) for X ~ chi-square(df). Throws Error(domain) for x < 0 or df < 1.
double chi_square_sf(double x, int df);

/// The x with chi_square_sf(x, df) == alpha, by bracketing and bisection.
/// Throws Error(domain) unless 0 < alpha < 1 and df >= 1.
double chi_square_quantile(double alpha, int df);

/// P(Z > z) for a standard normal Z.
double standard_normal_sf(double z);

}  // namespace glmrate
