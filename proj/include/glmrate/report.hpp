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
#include <string>
#include <variant>
#include <vector>

#include "glmrate/bonus_malus.hpp"
#include "glmrate/fitter.hpp"
#include "glmrate/inference.hpp"
#include "glmrate/tariff.hpp"

namespace glmrate {

/// A report cell: the exact value (emitted in JSON) plus its display text
/// (emitted in the plain rendering).
struct ReportValue {
  std::variant<std::string, double, std::int64_t, bool> data;
  std::string display;

  static ReportValue text(std::string s);
  static ReportValue integer(std::int64_t n);
  static ReportValue flag(bool b);
  /// Fixed-point display with `decimals` places.
  static ReportValue fixed(double x, int decimals);
  /// Coefficient-style: 5 decimals.
  static ReportValue estimate(double x);
  /// 4 significant figures, "< 2e-16" below that.
  static ReportValue p_value(double p);
};

struct ReportColumn {
  std::string key;
  std::string header;
};

struct ReportTable {
  std::vector<ReportColumn> columns;
  std::vector<std::vector<ReportValue>> rows;
};

struct ReportField {
  std::string key;
  std::string label;
  ReportValue value;
};

using ReportFields = std::vector<ReportField>;

struct ReportSection {
  std::string key;
  std::string title;
  std::variant<ReportTable, ReportFields, std::string> body;
};

struct ReportDocument {
  std::string kind;
  std::string title;
  std::vector<ReportSection> sections;
};

/// Aligned text tables; no locale dependence.
std::string render_plain(const ReportDocument& doc);

/// {"kind", "title", "sections": {<key>: {"title", "columns"+"rows" |
/// "fields" | "text"}}} with two-space indentation and a trailing newline.
/// Parsing and re-emitting the output reproduces it byte for byte.
std::string render_json(const ReportDocument& doc);

ReportDocument fit_report(const FitResult& fit, const std::string& formula_text, double alpha = kDefaultAlpha);

ReportDocument compare_report(const FitResult& reduced, const std::string& reduced_formula, const FitResult& full,
                              const std::string& full_formula, const TestReport& test);

ReportDocument tariff_report(const TariffTable& table);

ReportDocument trajectory_report(const BonusMalusTable& table, const std::vector<TrajectoryYear>& years,
                                 double base_premium);

ReportDocument steady_state_report(const BonusMalusTable& table, double lambda,
                                   const std::vector<double>& distribution, double base_premium);

}  // namespace glmrate
