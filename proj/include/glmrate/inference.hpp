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

#include <cstddef>
#include <span>
#include <string>

#include "glmrate/distributions.hpp"
#include "glmrate/fitter.hpp"

namespace glmrate {

inline constexpr double kDefaultAlpha = 0.05;

enum class Decision { reject, fail_to_reject };

/// Outcome of a chi-square test. The decision is "reject" exactly when
/// p_value < alpha.
struct TestReport {
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
  double alpha = kDefaultAlpha;
  /// chi-square quantile at alpha on df degrees of freedom.
  double critical_value = 0.0;
  Decision decision = Decision::fail_to_reject;
  std::string narrative;
};

/// Residual-deviance test of H0 "the residual deviance is not significantly
/// large": statistic D*, df = n - p.
TestReport goodness_of_fit(double scaled_deviance, int df_residual, double alpha = kDefaultAlpha);
/// Throws Error(value) when the fit has no residual degrees of freedom.
TestReport goodness_of_fit(const FitResult& fit, double alpha = kDefaultAlpha);

/// Change in scaled deviance D*_reduced - D*_full on q = p_full - p_reduced
/// degrees of freedom. "reject" means the reduced model is rejected in
/// favour of the full one. Throws Error(nesting) unless p_full > p_reduced.
TestReport compare_nested(double reduced_scaled_deviance, std::size_t reduced_parameters,
                          double full_scaled_deviance, std::size_t full_parameters, double alpha = kDefaultAlpha);

/// As above after verifying, from the term structure, that every term of
/// `reduced` appears in `full`, that both share the offset declaration and
/// were fitted to the same data. Raw designs without term structure are
/// compared by column label. Throws Error(nesting).
TestReport compare_nested(const FitResult& reduced, const FitResult& full, double alpha = kDefaultAlpha);

struct AicCandidate {
  double aic = 0.0;
  std::size_t n_parameters = 0;
};

/// Index of the smallest AIC; ties go to fewer parameters, then the lower
/// index. Throws Error(value) on an empty list.
std::size_t select_by_aic(std::span<const AicCandidate> candidates);
/// Also throws Error(nesting) when the fits come from different data.
std::size_t select_by_aic(std::span<const FitResult> fits);

}  // namespace glmrate
