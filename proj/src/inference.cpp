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

#include "glmrate/inference.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "glmrate/error.hpp"

namespace glmrate {

namespace {

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::value, "significance level must lie in (0, 1)");
}

Decision decide(double p_value, double alpha) {
  return p_value < alpha ? Decision::reject : Decision::fail_to_reject;
}

std::set<std::string> term_keys(const FitResult& fit) {
  std::set<std::string> keys;
  if (fit.structure.categorical()) {
    for (const auto& t : fit.structure.terms) keys.insert(t.key());
  } else {
    keys.insert(fit.labels.begin(), fit.labels.end());
  }
  return keys;
}

}  // namespace

TestReport goodness_of_fit(double scaled_deviance, int df_residual, double alpha) {
  require_alpha(alpha);
  if (df_residual <= 0)
    throw Error(ErrorCode::value, "a model with no residual degrees of freedom has no goodness-of-fit test");
  if (!(scaled_deviance >= 0.0)) throw Error(ErrorCode::value, "scaled deviance must be nonnegative");
  TestReport r;
  r.statistic = scaled_deviance;
  r.df = df_residual;
  r.p_value = chi_square_sf(scaled_deviance, df_residual);
  r.alpha = alpha;
  r.critical_value = chi_square_quantile(alpha, df_residual);
  r.decision = decide(r.p_value, alpha);
  r.narrative = "the residual deviance is not significantly large";
  return r;
}

TestReport goodness_of_fit(const FitResult& fit, double alpha) {
  if (!fit.converged) throw Error(ErrorCode::convergence, "goodness of fit requires a converged fit");
  return goodness_of_fit(fit.scaled_deviance, fit.df_residual, alpha);
}

TestReport compare_nested(double reduced_scaled_deviance, std::size_t reduced_parameters,
                          double full_scaled_deviance, std::size_t full_parameters, double alpha) {
  require_alpha(alpha);
  if (full_parameters <= reduced_parameters)
    throw Error(ErrorCode::nesting,
                fmt::format("models are not strictly nested: full model has {} parameters, reduced model {}",
                            full_parameters, reduced_parameters));
  TestReport r;
  // Rounding in the fits can push a genuine zero slightly negative.
  r.statistic = std::max(0.0, reduced_scaled_deviance - full_scaled_deviance);
  r.df = static_cast<int>(full_parameters - reduced_parameters);
  r.p_value = chi_square_sf(r.statistic, r.df);
  r.alpha = alpha;
  r.critical_value = chi_square_quantile(alpha, r.df);
  r.decision = decide(r.p_value, alpha);
  r.narrative = "the reduced model is adequate (the extra terms are not needed)";
  return r;
}

TestReport compare_nested(const FitResult& reduced, const FitResult& full, double alpha) {
  if (reduced.data_fingerprint != full.data_fingerprint)
    throw Error(ErrorCode::nesting, "models were fitted to different data");
  if (!(reduced.family == full.family)) throw Error(ErrorCode::nesting, "models use different families");
  if (reduced.structure.offset_log_column != full.structure.offset_log_column)
    throw Error(ErrorCode::nesting, "models declare different offsets");
  const auto small = term_keys(reduced);
  const auto large = term_keys(full);
  if (small.size() >= large.size() || !std::includes(large.begin(), large.end(), small.begin(), small.end()))
    throw Error(ErrorCode::nesting, "models are not strictly nested: the reduced model's terms must be a proper "
                                    "subset of the full model's");
  return compare_nested(reduced.scaled_deviance, reduced.n_parameters(), full.scaled_deviance, full.n_parameters(),
                        alpha);
}

std::size_t select_by_aic(std::span<const AicCandidate> candidates) {
  if (candidates.empty()) throw Error(ErrorCode::value, "no models to select from");
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const auto& c = candidates[i];
    const auto& b = candidates[best];
    if (c.aic < b.aic || (c.aic == b.aic && c.n_parameters < b.n_parameters)) best = i;
  }
  return best;
}

std::size_t select_by_aic(std::span<const FitResult> fits) {
  if (fits.empty()) throw Error(ErrorCode::value, "no models to select from");
  std::vector<AicCandidate> candidates;
  for (const auto& f : fits) {
    if (f.data_fingerprint != fits.front().data_fingerprint)
      throw Error(ErrorCode::nesting, "AIC comparison requires every model to be fitted to the same data");
    candidates.push_back({f.aic, f.n_parameters()});
  }
  return select_by_aic(std::span<const AicCandidate>(candidates));
}

}  // namespace glmrate
