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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "glmrate/formula.hpp"
#include "glmrate/portfolio.hpp"

namespace glmrate {

/// Indicator condition on one design column: the column is 1 for a row
/// exactly when every (factor, level) pair matches. The intercept column
/// has no conditions.
struct ColumnSpec {
  std::vector<std::pair<std::size_t, std::size_t>> conditions;  // (factor, level) into ModelStructure::factors
};

/// What a design matrix encodes: the factors a model touches (in schema
/// declaration order), its terms, and the meaning of every column.
/// Empty `factors`/`terms` means the design was supplied as raw numbers.
struct ModelStructure {
  std::vector<Factor> factors;
  std::vector<Term> terms;
  std::vector<ColumnSpec> columns;
  std::optional<std::string> offset_log_column;

  bool categorical() const noexcept { return !terms.empty(); }
  std::optional<std::size_t> factor_index(std::string_view name) const;
};

class DesignMatrix {
 public:
  DesignMatrix() = default;

  /// Builds a design from raw arrays. `offset` and `weights` default to zeros
  /// and ones. Throws Error(value) on inconsistent sizes.
  DesignMatrix(Eigen::MatrixXd matrix, std::vector<std::string> column_labels, Eigen::VectorXd response,
               Eigen::VectorXd offset = {}, Eigen::VectorXd weights = {}, ModelStructure structure = {});

  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
  const std::vector<std::string>& column_labels() const noexcept { return labels_; }
  const Eigen::VectorXd& response() const noexcept { return response_; }
  const Eigen::VectorXd& offset() const noexcept { return offset_; }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }
  const ModelStructure& structure() const noexcept { return structure_; }

  Eigen::Index rows() const noexcept { return matrix_.rows(); }
  Eigen::Index cols() const noexcept { return matrix_.cols(); }

  /// True when a column is labelled "(Intercept)".
  bool has_intercept() const;

  /// Hash of the data the design was built from (row count, responses and
  /// prior weights). Equal for every model fitted to the same portfolio.
  std::uint64_t data_fingerprint() const;

 private:
  Eigen::MatrixXd matrix_;
  std::vector<std::string> labels_;
  Eigen::VectorXd response_;
  Eigen::VectorXd offset_;
  Eigen::VectorXd weights_;
  ModelStructure structure_;
};

/// Column labels that are linear combinations of earlier columns, in column
/// order. Empty when the matrix has full column rank.
std::vector<std::string> dependent_columns(const Eigen::MatrixXd& matrix, const std::vector<std::string>& labels);

/// Column labels and meanings for `formula` under `schema`, without data.
/// Throws Error(schema) for unknown factors.
ModelStructure describe_columns(const FactorSchema& schema, const ModelFormula& formula,
                                std::vector<std::string>& labels);

/// Encodes categorical main effects and two-factor interactions with the
/// first declared level of every factor as the dropped reference level.
/// Interaction columns are products of the retained main-effect indicators,
/// with the first factor varying fastest ("region2:type2", "region3:type2",
/// ...). The offset is log(exposure) when declared, otherwise zero; prior
/// weights are one.
///
/// Throws Error(schema) for unknown factors or offset columns,
/// Error(value) for an empty dataset or a response other than `claims`, and
/// RankError naming the dependent columns when the result is rank deficient.
DesignMatrix encode_design(const PortfolioDataset& data, const ModelFormula& formula);

}  // namespace glmrate
