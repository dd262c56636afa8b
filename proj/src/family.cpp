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

#include "glmrate/family.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "glmrate/error.hpp"

namespace glmrate {

namespace {

[[noreturn]] void domain_error(const std::string& what) {
  throw Error(ErrorCode::domain, what);
}

void require_weight(double weight) {
  if (!(weight > 0.0) || !std::isfinite(weight))
    domain_error("weight must be positive and finite");
}

}  // namespace

Family Family::poisson() { return Family(FamilyKind::poisson, 1.0); }

Family Family::normal(double dispersion) {
  if (!(dispersion > 0.0) || !std::isfinite(dispersion))
    domain_error("normal dispersion must be positive and finite");
  return Family(FamilyKind::normal, dispersion);
}

std::string_view Family::name() const noexcept {
  return kind_ == FamilyKind::poisson ? "poisson" : "normal";
}

std::string_view Family::link_name() const noexcept {
  return kind_ == FamilyKind::poisson ? "log" : "identity";
}

double Family::cumulant(double theta) const {
  if (kind_ == FamilyKind::poisson) return mean_from_theta(theta);
  return 0.5 * theta * theta;
}

double Family::cumulant_d1(double theta) const { return mean_from_theta(theta); }

double Family::cumulant_d2(double theta) const {
  if (kind_ == FamilyKind::poisson) return mean_from_theta(theta);
  return 1.0;
}

double Family::mean_from_theta(double theta) const {
  if (!std::isfinite(theta)) domain_error("natural parameter must be finite");
  if (kind_ == FamilyKind::normal) return theta;
  const double mu = std::exp(theta);
  if (!std::isfinite(mu)) domain_error("exp(theta) overflows for theta = " + std::to_string(theta));
  return mu;
}

bool Family::valid_mean(double mu) const noexcept {
  if (kind_ == FamilyKind::poisson) return mu > 0.0 && std::isfinite(mu);
  return std::isfinite(mu);
}

bool Family::valid_response(double y) const noexcept {
  if (kind_ == FamilyKind::poisson) return y >= 0.0 && std::isfinite(y);
  return std::isfinite(y);
}

double Family::variance_function(double mu) const {
  if (!valid_mean(mu)) domain_error("mean outside the family's domain");
  return kind_ == FamilyKind::poisson ? mu : 1.0;
}

double Family::link(double mu) const {
  if (!valid_mean(mu)) domain_error("mean outside the family's domain");
  return kind_ == FamilyKind::poisson ? std::log(mu) : mu;
}

double Family::inverse_link(double eta) const {
  if (kind_ == FamilyKind::normal) return eta;
  return std::exp(eta);
}

double Family::link_derivative(double mu) const {
  if (!valid_mean(mu)) domain_error("mean outside the family's domain");
  return kind_ == FamilyKind::poisson ? 1.0 / mu : 1.0;
}

double Family::log_density(double y, double mu, double dispersion, double weight) const {
  require_weight(weight);
  if (!valid_mean(mu)) domain_error("mean outside the family's domain");
  if (!valid_response(y)) domain_error("response invalid for the " + std::string(name()) + " family");
  if (kind_ == FamilyKind::poisson) {
    if (dispersion != 1.0) domain_error("poisson dispersion is fixed at 1");
    const double ylogmu = y == 0.0 ? 0.0 : y * std::log(mu);
    return weight * (ylogmu - mu - std::lgamma(y + 1.0));
  }
  if (!(dispersion > 0.0)) domain_error("dispersion must be positive");
  const double scale = dispersion / weight;
  const double r = y - mu;
  return -0.5 * std::log(2.0 * std::numbers::pi * scale) - r * r / (2.0 * scale);
}

double Family::variance_of_observation(double mu, double dispersion, double weight) const {
  require_weight(weight);
  return variance_function(mu) * dispersion / weight;
}

double Family::unit_deviance(double y, double mu) const {
  if (kind_ == FamilyKind::normal) return (y - mu) * (y - mu);
  const double ylog = y > 0.0 ? y * std::log(y / mu) : 0.0;
  return 2.0 * (ylog - (y - mu));
}

double Family::initial_mean(double y) const {
  return kind_ == FamilyKind::poisson ? y + 0.5 : y;
}

Family family_from_name(std::string_view name) {
  if (name == "poisson") return Family::poisson();
  if (name == "normal" || name == "gaussian") return Family::normal();
  throw Error(ErrorCode::value, "unknown family '" + std::string(name) + "' (expected poisson or normal)");
}

}  // namespace glmrate
