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

#include "glmrate/tariff.hpp"

#include <cmath>

#include <fmt/format.h>
#include <json.hpp>

#include "glmrate/error.hpp"

namespace glmrate {

RateModel RateModel::from_fit(const FitResult& fit) {
  if (!fit.structure.categorical())
    throw Error(ErrorCode::schema, "rates need a model encoded from categorical factors");
  RateModel m;
  m.structure = fit.structure;
  m.labels = fit.labels;
  m.coefficients.assign(fit.coefficients.data(), fit.coefficients.data() + fit.coefficients.size());
  m.converged = fit.converged;
  return m;
}

RateModel RateModel::from_estimates(const FactorSchema& schema, const ModelFormula& formula,
                                    const std::map<std::string, double>& estimates) {
  RateModel m;
  m.structure = describe_columns(schema, formula, m.labels);
  m.coefficients.assign(m.labels.size(), 0.0);
  for (const auto& [label, value] : estimates) {
    bool found = false;
    for (std::size_t j = 0; j < m.labels.size(); ++j)
      if (m.labels[j] == label) {
        m.coefficients[j] = value;
        found = true;
      }
    if (!found) throw Error(ErrorCode::schema, fmt::format("no column labelled '{}' in this model", label));
  }
  return m;
}

namespace {

// Level index per structure factor for the given cell.
std::vector<std::size_t> resolve_cell(const ModelStructure& s, const Cell& cell) {
  std::vector<std::size_t> levels;
  for (const auto& f : s.factors) {
    auto it = cell.find(f.name);
    if (it == cell.end()) throw Error(ErrorCode::schema, fmt::format("cell gives no level for factor '{}'", f.name));
    auto idx = f.level_index(it->second);
    if (!idx) throw Error(ErrorCode::schema, fmt::format("unknown level '{}' for factor '{}'", it->second, f.name));
    levels.push_back(*idx);
  }
  return levels;
}

// Returns (intercept part, non-intercept part) of the linear predictor.
std::pair<double, double> linear_predictor(const RateModel& m, const std::vector<std::size_t>& levels) {
  double base = 0.0;
  double rest = 0.0;
  for (std::size_t j = 0; j < m.coefficients.size(); ++j) {
    const auto& conds = m.structure.columns[j].conditions;
    if (conds.empty()) {
      base += m.coefficients[j];
      continue;
    }
    bool active = true;
    for (const auto& [f, l] : conds) active = active && levels[f] == l;
    if (active) rest += m.coefficients[j];
  }
  return {base, rest};
}

void require_usable(const RateModel& m) {
  if (!m.converged) throw Error(ErrorCode::convergence, "cannot rate from an unconverged fit");
  if (m.structure.columns.size() != m.coefficients.size())
    throw Error(ErrorCode::schema, "rate model does not describe its coefficients");
}

}  // namespace

double predict_rate(const RateModel& model, const Cell& cell) {
  require_usable(model);
  const auto [base, rest] = linear_predictor(model, resolve_cell(model.structure, cell));
  return std::exp(base + rest);
}

double predict_rate(const FitResult& fit, const Cell& cell) { return predict_rate(RateModel::from_fit(fit), cell); }

double years_to_one_claim(double rate) {
  if (!(rate > 0.0)) throw Error(ErrorCode::domain, "claim rate must be positive");
  return 1.0 / rate;
}

TariffTable build_tariff_table(const RateModel& model) {
  require_usable(model);
  TariffTable table;
  table.dimensions = model.structure.factors;
  const std::size_t k = table.dimensions.size();
  std::vector<std::size_t> levels(k, 0);
  while (true) {
    const auto [base, rest] = linear_predictor(model, levels);
    TariffCell cell;
    for (std::size_t d = 0; d < k; ++d) cell.levels.push_back(table.dimensions[d].levels[levels[d]]);
    cell.annual_rate = std::exp(base + rest);
    cell.years_to_one_claim = years_to_one_claim(cell.annual_rate);
    cell.relativity = std::exp(rest);
    table.cells.push_back(std::move(cell));

    // Odometer increment, last dimension fastest.
    std::size_t d = k;
    while (d > 0) {
      --d;
      if (++levels[d] < table.dimensions[d].levels.size()) break;
      levels[d] = 0;
      if (d == 0) return table;
    }
    if (k == 0) return table;
  }
}

TariffTable build_tariff_table(const FitResult& fit) { return build_tariff_table(RateModel::from_fit(fit)); }

std::string tariff_to_csv(const TariffTable& table) {
  std::string out;
  for (const auto& d : table.dimensions) out += d.name + ",";
  out += "annual_rate,years_to_one_claim,relativity\n";
  for (const auto& c : table.cells) {
    for (const auto& l : c.levels) out += l + ",";
    out += fmt::format("{},{},{}\n", c.annual_rate, c.years_to_one_claim, c.relativity);
  }
  return out;
}

std::string tariff_to_json(const TariffTable& table) {
  using json = nlohmann::ordered_json;
  json doc;
  doc["dimensions"] = json::array();
  for (const auto& d : table.dimensions) doc["dimensions"].push_back({{"name", d.name}, {"levels", d.levels}});
  doc["cells"] = json::array();
  for (const auto& c : table.cells) {
    json levels = json::object();
    for (std::size_t i = 0; i < c.levels.size(); ++i) levels[table.dimensions[i].name] = c.levels[i];
    doc["cells"].push_back({{"levels", levels},
                            {"annual_rate", c.annual_rate},
                            {"years_to_one_claim", c.years_to_one_claim},
                            {"relativity", c.relativity}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace glmrate
