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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "glmrate/design.hpp"
#include "glmrate/family.hpp"

namespace glmrate {

struct FitControls {
  /// Stop when |D_t - D_{t-1}| / (|D_t| + 0.1) falls below this.
  double tolerance = 1e-8;
  int max_iterations = 25;
  /// Halvings of a step that increased the deviance or left the mean domain.
  int max_step_halvings = 10;
};

struct WaldRow {
  double estimate = 0.0;
  double std_error = 0.0;
  double z_value = 0.0;
  double p_value = 1.0;
};

/// Output of a converged fit. Immutable once returned.
struct FitResult {
  Family family = Family::poisson();

  std::vector<std::string> labels;
  Eigen::VectorXd coefficients;
  /// Inverse Fisher information at the final iterate (phi = 1, no rescaling).
  Eigen::MatrixXd covariance;
  Eigen::VectorXd std_errors;
  Eigen::VectorXd z_values;
  Eigen::VectorXd p_values;

  Eigen::VectorXd fitted_means;
  /// Including the offset.
  Eigen::VectorXd linear_predictors;

  double deviance = 0.0;
  double scaled_deviance = 0.0;
  double null_deviance = 0.0;
  int df_residual = 0;
  int df_null = 0;
  double log_likelihood = 0.0;
  double aic = 0.0;
  int n_iterations = 0;
  bool converged = false;
  /// Deviance at the starting means followed by one entry per iteration.
  std::vector<double> deviance_trace;

  // Provenance, used by the inference and tariff layers.
  Eigen::VectorXd response;
  Eigen::VectorXd prior_weights;
  Eigen::VectorXd offset;
  ModelStructure structure;
  std::uint64_t data_fingerprint = 0;

  std::size_t n_observations() const noexcept { return static_cast<std::size_t>(response.size()); }
  std::size_t n_parameters() const noexcept { return labels.size(); }

  std::optional<double> coefficient(std::string_view label) const;
};

/// Maximum likelihood by iteratively reweighted least squares.
///
/// Starts from mu_i = y_i + 0.5 (Poisson) or mu_i = y_i (Normal). Each step
/// solves the weighted least-squares problem for the working response
/// z = eta - offset + (y - mu) g'(mu) with working weights
/// w / (V(mu) g'(mu)^2) by a Householder QR of the row-scaled design. A step
/// whose deviance rises (or whose means leave the family's domain) is
/// halved toward the previous coefficients up to `max_step_halvings` times.
///
/// Throws RankError for a rank-deficient design, Error(domain) for responses
/// invalid for the family, and ConvergenceError (with the deviance trace)
/// when the iteration limit is reached or a step cannot be repaired.
FitResult fit(const DesignMatrix& design, const Family& family, const FitControls& controls = {});

/// Sum over observations of family.log_density at the fitted means,
/// including the c(y, phi) term.
double log_likelihood(const FitResult& fit, const DesignMatrix& design, const Family& family);

/// (D, D*) with D = 2 phi (l_saturated - l_model) and D* = D / phi.
std::pair<double, double> deviance_pair(const FitResult& fit, const Family& family);

/// z = estimate / std_error, p = 2 * P(Z > |z|). A zero estimate gives
/// z = 0, p = 1 whatever the standard error.
WaldRow wald(double estimate, double std_error);

std::vector<WaldRow> wald_statistics(const FitResult& fit);

}  // namespace glmrate
