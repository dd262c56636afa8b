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

#include "glmrate/fitter.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "glmrate/distributions.hpp"
#include "glmrate/error.hpp"

namespace glmrate {

std::optional<double> FitResult::coefficient(std::string_view label) const {
  for (std::size_t j = 0; j < labels.size(); ++j)
    if (labels[j] == label) return coefficients[static_cast<Eigen::Index>(j)];
  return std::nullopt;
}

namespace {

struct IrlsResult {
  Eigen::VectorXd beta;
  Eigen::VectorXd eta;
  Eigen::VectorXd mu;
  double deviance = 0.0;
  std::vector<double> trace;
  int iterations = 0;
};

double total_deviance(const Family& family, const Eigen::VectorXd& y, const Eigen::VectorXd& mu,
                      const Eigen::VectorXd& w) {
  double d = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) d += w[i] * family.unit_deviance(y[i], mu[i]);
  return d;
}

bool means_valid(const Family& family, const Eigen::VectorXd& mu) {
  for (Eigen::Index i = 0; i < mu.size(); ++i)
    if (!family.valid_mean(mu[i])) return false;
  return true;
}

Eigen::VectorXd working_weights(const Family& family, const Eigen::VectorXd& mu, const Eigen::VectorXd& w) {
  Eigen::VectorXd out(mu.size());
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    const double gprime = family.link_derivative(mu[i]);
    out[i] = w[i] / (family.variance_function(mu[i]) * gprime * gprime);
  }
  return out;
}

IrlsResult run_irls(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& offset,
                    const Eigen::VectorXd& w, const Family& family, const FitControls& controls) {
  const auto n = x.rows();
  IrlsResult r;
  r.mu.resize(n);
  r.eta.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    r.mu[i] = family.initial_mean(y[i]);
    r.eta[i] = family.link(r.mu[i]);
  }
  double dev_old = total_deviance(family, y, r.mu, w);
  r.trace.push_back(dev_old);
  std::optional<Eigen::VectorXd> beta_old;

  auto evaluate = [&](const Eigen::VectorXd& beta) {
    r.beta = beta;
    r.eta = x * beta + offset;
    for (Eigen::Index i = 0; i < n; ++i) r.mu[i] = family.inverse_link(r.eta[i]);
    const bool valid = means_valid(family, r.mu);
    r.deviance = valid ? total_deviance(family, y, r.mu, w) : std::numeric_limits<double>::infinity();
    return valid && std::isfinite(r.deviance);
  };

  for (int iter = 1; iter <= controls.max_iterations; ++iter) {
    r.iterations = iter;
    Eigen::VectorXd z(n);
    Eigen::VectorXd sqrt_w(n);
    const Eigen::VectorXd ww = working_weights(family, r.mu, w);
    for (Eigen::Index i = 0; i < n; ++i) {
      z[i] = r.eta[i] - offset[i] + (y[i] - r.mu[i]) * family.link_derivative(r.mu[i]);
      sqrt_w[i] = std::sqrt(ww[i]);
    }
    const Eigen::MatrixXd a = sqrt_w.asDiagonal() * x;
    const Eigen::VectorXd b = sqrt_w.cwiseProduct(z);
    Eigen::VectorXd beta = a.householderQr().solve(b);

    bool ok = evaluate(beta);
    if (beta_old) {
      int halvings = 0;
      auto worse = [&] { return !ok || r.deviance - dev_old > controls.tolerance * (std::abs(r.deviance) + 0.1); };
      while (worse()) {
        if (halvings == controls.max_step_halvings) {
          r.trace.push_back(r.deviance);
          throw ConvergenceError(
              fmt::format("IRLS step could not be repaired after {} halvings at iteration {}", halvings, iter),
              r.trace);
        }
        beta = 0.5 * (beta + *beta_old);
        ok = evaluate(beta);
        ++halvings;
      }
    } else if (!ok) {
      r.trace.push_back(r.deviance);
      throw ConvergenceError("first IRLS step left the mean domain", r.trace);
    }

    r.trace.push_back(r.deviance);
    if (std::abs(r.deviance - dev_old) / (std::abs(r.deviance) + 0.1) < controls.tolerance) return r;
    dev_old = r.deviance;
    beta_old = r.beta;
  }
  throw ConvergenceError(fmt::format("IRLS did not converge in {} iterations (deviance trace: {:.10g})",
                                     controls.max_iterations, fmt::join(r.trace, ", ")),
                         r.trace);
}

}  // namespace

FitResult fit(const DesignMatrix& design, const Family& family, const FitControls& controls) {
  const auto& x = design.matrix();
  const auto& y = design.response();
  const auto n = x.rows();
  const auto p = x.cols();
  if (n == 0) throw Error(ErrorCode::value, "cannot fit a model to zero observations");
  if (p == 0) throw Error(ErrorCode::value, "design has no columns");
  if (n < p) throw Error(ErrorCode::value, fmt::format("{} observations cannot identify {} coefficients", n, p));
  for (Eigen::Index i = 0; i < n; ++i)
    if (!family.valid_response(y[i]))
      throw Error(ErrorCode::domain,
                  fmt::format("row {}: response {} is invalid for the {} family", i + 1, y[i], family.name()));
  if (auto dep = dependent_columns(x, design.column_labels()); !dep.empty()) {
    auto message = fmt::format("design matrix is rank deficient; dependent columns: {}", fmt::join(dep, ", "));
    throw RankError(std::move(message), std::move(dep));
  }

  const auto& w = design.weights();
  const auto& offset = design.offset();
  IrlsResult irls = run_irls(x, y, offset, w, family, controls);

  FitResult out;
  out.family = family;
  out.labels = design.column_labels();
  out.coefficients = irls.beta;
  out.linear_predictors = irls.eta;
  out.fitted_means = irls.mu;
  out.deviance = irls.deviance;
  out.scaled_deviance = irls.deviance / family.dispersion();
  out.n_iterations = irls.iterations;
  out.converged = true;
  out.deviance_trace = std::move(irls.trace);
  out.response = y;
  out.prior_weights = w;
  out.offset = offset;
  out.structure = design.structure();
  out.data_fingerprint = design.data_fingerprint();
  out.df_residual = static_cast<int>(n - p);

  // Covariance from the QR of the row-scaled design at the final means:
  // (X'WX)^-1 = R^-1 R^-T.
  const Eigen::VectorXd ww = working_weights(family, irls.mu, w);
  const Eigen::MatrixXd a = ww.cwiseSqrt().asDiagonal() * x;
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  const Eigen::MatrixXd r = qr.matrixQR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd r_inv =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
  out.covariance = family.dispersion() * r_inv * r_inv.transpose();
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();

  out.std_errors.resize(p);
  out.z_values.resize(p);
  out.p_values.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const auto row = wald(out.coefficients[j], std::sqrt(out.covariance(j, j)));
    out.std_errors[j] = row.std_error;
    out.z_values[j] = row.z_value;
    out.p_values[j] = row.p_value;
  }

  if (design.has_intercept()) {
    const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(n, 1);
    out.null_deviance = run_irls(ones, y, offset, w, family, controls).deviance;
    out.df_null = static_cast<int>(n - 1);
  } else {
    Eigen::VectorXd mu0(n);
    for (Eigen::Index i = 0; i < n; ++i) mu0[i] = family.inverse_link(offset[i]);
    out.null_deviance = total_deviance(family, y, mu0, w);
    out.df_null = static_cast<int>(n);
  }

  out.log_likelihood = log_likelihood(out, design, family);
  out.aic = -2.0 * out.log_likelihood + 2.0 * static_cast<double>(p);
  return out;
}

double log_likelihood(const FitResult& fit, const DesignMatrix& design, const Family& family) {
  const auto& y = design.response();
  const auto& w = design.weights();
  double ll = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i)
    ll += family.log_density(y[i], fit.fitted_means[i], family.dispersion(), w[i]);
  return ll;
}

std::pair<double, double> deviance_pair(const FitResult& fit, const Family& family) {
  const double d = total_deviance(family, fit.response, fit.fitted_means, fit.prior_weights);
  return {d, d / family.dispersion()};
}

WaldRow wald(double estimate, double std_error) {
  WaldRow row{estimate, std_error, 0.0, 1.0};
  if (estimate == 0.0) return row;
  row.z_value = estimate / std_error;
  row.p_value = 2.0 * standard_normal_sf(std::abs(row.z_value));
  return row;
}

std::vector<WaldRow> wald_statistics(const FitResult& fit) {
  std::vector<WaldRow> rows;
  for (Eigen::Index j = 0; j < fit.coefficients.size(); ++j)
    rows.push_back(wald(fit.coefficients[j], fit.std_errors[j]));
  return rows;
}

}  // namespace glmrate
