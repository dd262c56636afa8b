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

#include <string_view>

namespace glmrate {

enum class FamilyKind { poisson, normal };

/// An exponential-family member with density
///   f(y; theta, phi) = exp((y*theta - b(theta)) / a(phi) + c(y, phi))
/// paired with its canonical link.
///
/// Only two members exist: Poisson with the log link, which is what the
/// rating models use, and Normal with the identity link, which reduces IRLS
/// to least squares and so doubles as a closed-form check on the fitter.
/// The dispersion is a fixed property of the family value; it is never
/// estimated (Poisson: phi = 1).
///
/// Values are immutable and every member function is pure.
class Family {
 public:
  static Family poisson();
  static Family normal(double dispersion = 1.0);

  FamilyKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept;
  std::string_view link_name() const noexcept;
  double dispersion() const noexcept { return dispersion_; }

  // Cumulant function b(theta) and its first two derivatives.
  double cumulant(double theta) const;
  double cumulant_d1(double theta) const;
  double cumulant_d2(double theta) const;

  /// b'(theta). Throws Error(domain) instead of returning infinity.
  double mean_from_theta(double theta) const;

  /// V(mu). Throws Error(domain) when mu is outside the mean domain.
  double variance_function(double mu) const;

  double link(double mu) const;
  double inverse_link(double eta) const;
  /// g'(mu)
  double link_derivative(double mu) const;

  bool valid_mean(double mu) const noexcept;
  bool valid_response(double y) const noexcept;

  /// Log-likelihood contribution of one observation, including c(y, phi).
  /// For the Normal member the weight scales the variance (phi / w); for
  /// the Poisson member the log density is multiplied by the weight, the
  /// convention under which the weighted deviance and AIC stay consistent.
  double log_density(double y, double mu, double dispersion, double weight) const;

  /// V(mu) * phi / w
  double variance_of_observation(double mu, double dispersion, double weight) const;

  /// Unit deviance d(y, mu), so that D = sum_i w_i d(y_i, mu_i).
  double unit_deviance(double y, double mu) const;

  /// IRLS starting mean for a response value.
  double initial_mean(double y) const;

  friend bool operator==(const Family&, const Family&) = default;

 private:
  Family(FamilyKind kind, double dispersion) : kind_(kind), dispersion_(dispersion) {}

  FamilyKind kind_;
  double dispersion_;
};

/// Parses "poisson" or "normal"; throws Error(value) otherwise.
Family family_from_name(std::string_view name);

}  // namespace glmrate
