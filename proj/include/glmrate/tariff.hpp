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

#include <map>
#include <string>
#include <vector>

#include "glmrate/design.hpp"
#include "glmrate/fitter.hpp"

namespace glmrate {

/// A rating cell: factor name -> level.
using Cell = std::map<std::string, std::string>;

/// Coefficients of a categorical log-linear model together with the meaning
/// of each coefficient. Built from a fit, or directly from externally supplied
/// estimates keyed by column label.
struct RateModel {
  ModelStructure structure;
  std::vector<std::string> labels;
  std::vector<double> coefficients;
  bool converged = true;

  static RateModel from_fit(const FitResult& fit);

  /// Encodes `formula` against `schema` to get the column meanings, then
  /// takes each coefficient from `estimates` by label (missing labels are
  /// zero, unknown labels throw Error(schema)).
  static RateModel from_estimates(const FactorSchema& schema, const ModelFormula& formula,
                                  const std::map<std::string, double>& estimates);
};

/// exp of the linear predictor for `cell` with zero offset, i.e. expected
/// claims per unit of exposure. Throws Error(schema) for a missing factor
/// or unknown level and Error(convergence) for an unconverged model.
double predict_rate(const RateModel& model, const Cell& cell);
double predict_rate(const FitResult& fit, const Cell& cell);

/// 1 / rate. Throws Error(domain) for rate <= 0.
double years_to_one_claim(double rate);

struct TariffCell {
  std::vector<std::string> levels;  // one per dimension
  double annual_rate = 0.0;
  double years_to_one_claim = 0.0;
  /// rate / base rate, computed as exp of the active non-intercept
  /// coefficients so that the base cell is exactly 1.
  double relativity = 1.0;
};

struct TariffTable {
  std::vector<Factor> dimensions;
  /// Every level combination, first dimension varying slowest.
  std::vector<TariffCell> cells;
};

TariffTable build_tariff_table(const RateModel& model);
TariffTable build_tariff_table(const FitResult& fit);

/// Header `<factor...>,annual_rate,years_to_one_claim,relativity`, one row
/// per cell, numbers at full (round-trip) precision.
std::string tariff_to_csv(const TariffTable& table);
/// {"dimensions":[{"name","levels"}...],"cells":[{"levels":{...},...}]}
std::string tariff_to_json(const TariffTable& table);

}  // namespace glmrate
