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
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace glmrate {

/// A categorical risk factor. The first level is the reference level.
struct Factor {
  std::string name;
  std::vector<std::string> levels;

  /// Index of `level` in `levels`, if declared.
  std::optional<std::size_t> level_index(std::string_view level) const;
};

struct FactorSchema {
  std::vector<Factor> factors;

  const Factor* find(std::string_view name) const;
};

/// One cell of the portfolio. `levels[k]` is the level index of factor k in
/// the dataset schema.
struct Observation {
  std::vector<std::size_t> levels;
  double claims = 0.0;
  double exposure = 1.0;
};

class PortfolioDataset {
 public:
  PortfolioDataset() = default;
  /// Validates every row against the schema; throws Error(schema|value).
  PortfolioDataset(FactorSchema schema, std::vector<Observation> rows,
                   bool exposure_defaulted = false);

  const FactorSchema& schema() const noexcept { return schema_; }
  const std::vector<Observation>& rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }
  bool empty() const noexcept { return rows_.empty(); }

  /// True when the source had no exposure column and 1.0 was filled in.
  bool exposure_defaulted() const noexcept { return exposure_defaulted_; }

  const std::string& level_of(std::size_t row, std::size_t factor) const {
    return schema_.factors[factor].levels[rows_[row].levels[factor]];
  }

  double total_claims() const;

 private:
  FactorSchema schema_;
  std::vector<Observation> rows_;
  bool exposure_defaulted_ = false;
};

inline constexpr std::string_view kClaimsColumn = "claims";
inline constexpr std::string_view kExposureColumn = "exposure";

/// Reads a cell-aggregated CSV: a header row, then one row per cell. Every
/// factor in `schema` must be a column; `claims` is required and `exposure`
/// optional. Other columns are ignored.
PortfolioDataset load_portfolio(std::istream& in, const FactorSchema& schema);
PortfolioDataset load_portfolio(std::string_view csv, const FactorSchema& schema);

/// Derives a schema from the CSV itself: every column other than `claims`
/// and `exposure` is a factor, with its distinct levels sorted (numerically
/// when all levels are numbers) so that the smallest level is the reference.
FactorSchema infer_schema(std::string_view csv);

/// Reads and parses a CSV file with an inferred schema.
PortfolioDataset load_portfolio_file(const std::string& path);

}  // namespace glmrate
