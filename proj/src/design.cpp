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

#include "glmrate/design.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "glmrate/error.hpp"

namespace glmrate {

std::optional<std::size_t> ModelStructure::factor_index(std::string_view name) const {
  for (std::size_t i = 0; i < factors.size(); ++i)
    if (factors[i].name == name) return i;
  return std::nullopt;
}

DesignMatrix::DesignMatrix(Eigen::MatrixXd matrix, std::vector<std::string> column_labels, Eigen::VectorXd response,
                           Eigen::VectorXd offset, Eigen::VectorXd weights, ModelStructure structure)
    : matrix_(std::move(matrix)),
      labels_(std::move(column_labels)),
      response_(std::move(response)),
      offset_(std::move(offset)),
      weights_(std::move(weights)),
      structure_(std::move(structure)) {
  const auto n = matrix_.rows();
  if (offset_.size() == 0) offset_ = Eigen::VectorXd::Zero(n);
  if (weights_.size() == 0) weights_ = Eigen::VectorXd::Ones(n);
  if (static_cast<Eigen::Index>(labels_.size()) != matrix_.cols())
    throw Error(ErrorCode::value, fmt::format("{} column labels for {} columns", labels_.size(), matrix_.cols()));
  if (response_.size() != n || offset_.size() != n || weights_.size() != n)
    throw Error(ErrorCode::value, "response, offset and weight vectors must have one entry per row");
  if (!structure_.columns.empty() && structure_.columns.size() != labels_.size())
    throw Error(ErrorCode::value, "model structure does not describe every column");
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i]))
      throw Error(ErrorCode::value, fmt::format("row {}: prior weight must be positive", i + 1));
}

bool DesignMatrix::has_intercept() const {
  return std::find(labels_.begin(), labels_.end(), "(Intercept)") != labels_.end();
}

std::uint64_t DesignMatrix::data_fingerprint() const {
  // FNV-1a over the raw bytes.
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const void* data, std::size_t size) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
      h ^= p[i];
      h *= 1099511628211ULL;
    }
  };
  const std::int64_t n = matrix_.rows();
  mix(&n, sizeof n);
  mix(response_.data(), sizeof(double) * static_cast<std::size_t>(response_.size()));
  mix(weights_.data(), sizeof(double) * static_cast<std::size_t>(weights_.size()));
  return h;
}

std::vector<std::string> dependent_columns(const Eigen::MatrixXd& matrix, const std::vector<std::string>& labels) {
  constexpr double kTolerance = 1e-9;
  std::vector<std::string> dependent;
  std::vector<Eigen::VectorXd> basis;
  for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
    Eigen::VectorXd v = matrix.col(j);
    const double norm = v.norm();
    // Two passes of modified Gram-Schmidt keep the residual accurate.
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) v -= q.dot(v) * q;
    const double residual = v.norm();
    if (norm == 0.0 || residual <= kTolerance * norm) {
      dependent.push_back(labels[static_cast<std::size_t>(j)]);
    } else {
      basis.push_back(v / residual);
    }
  }
  return dependent;
}

ModelStructure describe_columns(const FactorSchema& schema, const ModelFormula& formula,
                                std::vector<std::string>& labels) {
  // Factors referenced by the formula, kept in schema declaration order.
  std::vector<bool> used(schema.factors.size(), false);
  for (const auto& term : formula.terms) {
    for (const auto& name : term.factors) {
      auto it = std::find_if(schema.factors.begin(), schema.factors.end(),
                             [&](const Factor& f) { return f.name == name; });
      if (it == schema.factors.end()) throw Error(ErrorCode::schema, fmt::format("unknown factor '{}'", name));
      used[static_cast<std::size_t>(it - schema.factors.begin())] = true;
    }
  }
  ModelStructure structure;
  structure.terms = formula.terms;
  structure.offset_log_column = formula.offset_log_column;
  for (std::size_t k = 0; k < schema.factors.size(); ++k)
    if (used[k]) structure.factors.push_back(schema.factors[k]);

  labels.clear();
  for (const auto& term : formula.terms) {
    switch (term.kind) {
      case Term::Kind::intercept:
        labels.emplace_back("(Intercept)");
        structure.columns.push_back({});
        break;
      case Term::Kind::main_effect: {
        const auto f = *structure.factor_index(term.factors[0]);
        const auto& factor = structure.factors[f];
        for (std::size_t l = 1; l < factor.levels.size(); ++l) {
          labels.push_back(factor.name + factor.levels[l]);
          structure.columns.push_back({{{f, l}}});
        }
        break;
      }
      case Term::Kind::interaction: {
        const auto fa = *structure.factor_index(term.factors[0]);
        const auto fb = *structure.factor_index(term.factors[1]);
        const auto& a = structure.factors[fa];
        const auto& b = structure.factors[fb];
        for (std::size_t lb = 1; lb < b.levels.size(); ++lb)
          for (std::size_t la = 1; la < a.levels.size(); ++la) {
            labels.push_back(fmt::format("{}{}:{}{}", a.name, a.levels[la], b.name, b.levels[lb]));
            structure.columns.push_back({{{fa, la}, {fb, lb}}});
          }
        break;
      }
    }
  }
  return structure;
}

DesignMatrix encode_design(const PortfolioDataset& data, const ModelFormula& formula) {
  if (data.empty()) throw Error(ErrorCode::value, "cannot encode a design for an empty dataset");
  if (formula.response != kClaimsColumn)
    throw Error(ErrorCode::value,
                fmt::format("response '{}' is not available; the count column is 'claims'", formula.response));

  const auto& schema = data.schema();
  std::vector<std::string> labels;
  ModelStructure structure = describe_columns(schema, formula, labels);
  std::vector<std::size_t> schema_index;  // structure factor -> schema factor
  for (const auto& f : structure.factors)
    for (std::size_t k = 0; k < schema.factors.size(); ++k)
      if (schema.factors[k].name == f.name) schema_index.push_back(k);

  const auto n = static_cast<Eigen::Index>(data.size());
  const auto p = static_cast<Eigen::Index>(labels.size());
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, p);
  Eigen::VectorXd y(n);
  Eigen::VectorXd offset = Eigen::VectorXd::Zero(n);

  if (formula.offset_log_column && *formula.offset_log_column != kExposureColumn)
    throw Error(ErrorCode::schema, fmt::format("offset column '{}' is not available; only log(exposure) is supported",
                                               *formula.offset_log_column));

  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& obs = data.rows()[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < p; ++j) {
      const auto& spec = structure.columns[static_cast<std::size_t>(j)];
      const bool active = std::all_of(spec.conditions.begin(), spec.conditions.end(), [&](const auto& c) {
        return obs.levels[schema_index[c.first]] == c.second;
      });
      x(i, j) = active ? 1.0 : 0.0;
    }
    y[i] = obs.claims;
    if (formula.offset_log_column) offset[i] = std::log(obs.exposure);
  }

  auto dependent = dependent_columns(x, labels);
  if (!dependent.empty()) {
    auto message = fmt::format("design matrix is rank deficient (dummy trap); dependent columns: {}",
                               fmt::join(dependent, ", "));
    throw RankError(std::move(message), std::move(dependent));
  }

  return DesignMatrix(std::move(x), std::move(labels), std::move(y), std::move(offset), {}, std::move(structure));
}

}  // namespace glmrate
