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

#include "glmrate/bonus_malus.hpp"

#include <cmath>

#include <fmt/format.h>
#include <json.hpp>

#include "glmrate/error.hpp"

namespace glmrate {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::value, "bonus-malus table: " + what); }

int claim_category(int claims) {
  if (claims < 0) throw Error(ErrorCode::value, "claim count must be nonnegative");
  return claims >= 3 ? 3 : claims;
}

}  // namespace

BonusMalusTable BonusMalusTable::standard() {
  return BonusMalusTable({120, 100, 90, 80, 70, 60, 55, 50, 45, 40, 37.5, 35, 32.5, 30},
                         {{
                             {2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 14},
                             {1, 1, 1, 1, 2, 3, 4, 5, 6, 7, 7, 8, 8, 9},
                             {1, 1, 1, 1, 1, 1, 1, 1, 2, 3, 3, 4, 4, 5},
                             {1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1},
                         }},
                         2);
}

BonusMalusTable::BonusMalusTable(std::vector<double> percentages,
                                 std::array<std::vector<int>, kClaimCategories> transitions, int entry_step)
    : percentages_(std::move(percentages)), transitions_(std::move(transitions)), entry_step_(entry_step) {
  const int n = n_steps();
  if (n < 2) invalid("needs at least two steps");
  if (entry_step_ < 1 || entry_step_ > n) invalid(fmt::format("entry step {} outside 1..{}", entry_step_, n));
  for (int i = 0; i < n; ++i) {
    if (!(percentages_[i] > 0.0) || !std::isfinite(percentages_[i]))
      invalid(fmt::format("percentage for step {} must be positive", i + 1));
    if (i > 0 && !(percentages_[i] < percentages_[i - 1]))
      invalid(fmt::format("percentages must strictly decrease (step {} -> {})", i, i + 1));
  }
  for (std::size_t c = 0; c < kClaimCategories; ++c) {
    if (static_cast<int>(transitions_[c].size()) != n)
      invalid(fmt::format("transition row {} has {} entries, expected {}", c, transitions_[c].size(), n));
    for (int s = 0; s < n; ++s) {
      const int to = transitions_[c][s];
      if (to < 1 || to > n) invalid(fmt::format("row {} sends step {} to {}, outside 1..{}", c, s + 1, to, n));
      if (c > 0 && to > transitions_[c - 1][s])
        invalid(fmt::format("step {}: {} claims lead to a better step than {}", s + 1, c, c - 1));
    }
  }
  for (int s = 1; s < n; ++s)
    if (transitions_[0][s] < transitions_[0][s - 1]) invalid("claim-free transitions must be nondecreasing");
  if (transitions_[0][n - 1] != n) invalid("a claim-free year at the top step must stay there");
  for (int s = 0; s < n; ++s)
    if (transitions_[3][s] != 1) invalid("three or more claims must lead to step 1");
}

BonusMalusTable BonusMalusTable::from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(fmt::format("bonus-malus JSON: {}", e.what()), 0, e.byte);
  }
  try {
    auto percentages = doc.at("percentages").get<std::vector<double>>();
    auto rows = doc.at("transitions").get<std::vector<std::vector<int>>>();
    if (rows.size() != kClaimCategories) invalid("expected four transition rows (0, 1, 2, 3+ claims)");
    if (doc.contains("steps") && doc.at("steps").get<std::size_t>() != percentages.size())
      invalid("'steps' does not match the number of percentages");
    const int entry = doc.value("entry_step", 2);
    std::array<std::vector<int>, kClaimCategories> transitions;
    for (std::size_t c = 0; c < kClaimCategories; ++c) transitions[c] = std::move(rows[c]);
    return BonusMalusTable(std::move(percentages), std::move(transitions), entry);
  } catch (const nlohmann::json::exception& e) {
    invalid(e.what());
  }
}

std::string BonusMalusTable::to_json() const {
  nlohmann::ordered_json doc;
  doc["steps"] = n_steps();
  doc["entry_step"] = entry_step_;
  doc["percentages"] = percentages_;
  doc["transitions"] = nlohmann::ordered_json::array();
  for (const auto& row : transitions_) doc["transitions"].push_back(row);
  return doc.dump(2) + "\n";
}

void BonusMalusTable::require_step(int step) const {
  if (step < 1 || step > n_steps())
    throw Error(ErrorCode::value, fmt::format("step {} outside 1..{}", step, n_steps()));
}

double BonusMalusTable::percentage(int step) const {
  require_step(step);
  return percentages_[static_cast<std::size_t>(step - 1)];
}

int BonusMalusTable::next_step(int step, int claims) const {
  require_step(step);
  return transitions_[static_cast<std::size_t>(claim_category(claims))][static_cast<std::size_t>(step - 1)];
}

double BonusMalusTable::premium(int step, double base_premium) const {
  if (!(base_premium > 0.0) || !std::isfinite(base_premium))
    throw Error(ErrorCode::value, "base premium must be positive");
  return base_premium * percentage(step) / 100.0;
}

Eigen::MatrixXd BonusMalusTable::transition_matrix(double lambda) const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw Error(ErrorCode::domain, "claim frequency must be >= 0");
  const double p0 = std::exp(-lambda);
  const double p1 = lambda * p0;
  const double p2 = 0.5 * lambda * lambda * p0;
  const std::array<double, kClaimCategories> probs{p0, p1, p2, std::max(0.0, 1.0 - p0 - p1 - p2)};
  const int n = n_steps();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int s = 0; s < n; ++s)
    for (std::size_t c = 0; c < kClaimCategories; ++c) m(s, transitions_[c][s] - 1) += probs[c];
  return m;
}

std::vector<TrajectoryYear> simulate_trajectory(const BonusMalusTable& table, int start_step,
                                                const std::vector<int>& yearly_claims, double base_premium) {
  table.percentage(start_step);  // range check
  std::vector<TrajectoryYear> years;
  int step = start_step;
  for (std::size_t t = 0; t < yearly_claims.size(); ++t) {
    TrajectoryYear y;
    y.year = static_cast<int>(t + 1);
    y.step_entering = step;
    y.claims = yearly_claims[t];
    y.premium = table.premium(step, base_premium);
    y.step_after = table.next_step(step, yearly_claims[t]);
    step = y.step_after;
    years.push_back(y);
  }
  return years;
}

std::vector<double> stationary_distribution(const BonusMalusTable& table, double lambda) {
  const Eigen::MatrixXd p = table.transition_matrix(lambda);
  const auto n = p.rows();
  Eigen::RowVectorXd pi = Eigen::RowVectorXd::Constant(n, 1.0 / static_cast<double>(n));
  constexpr int kMaxIterations = 10'000'000;
  bool settled = false;
  for (int it = 0; it < kMaxIterations; ++it) {
    Eigen::RowVectorXd next = pi * p;
    next /= next.sum();
    const double change = (next - pi).cwiseAbs().sum();
    pi = next;
    if (change < 1e-12) {
      settled = true;
      break;
    }
  }
  if (!settled) throw Error(ErrorCode::convergence, "stationary distribution did not settle");
  return std::vector<double>(pi.data(), pi.data() + n);
}

double expected_premium(const BonusMalusTable& table, const std::vector<double>& distribution,
                        double base_premium) {
  if (static_cast<int>(distribution.size()) != table.n_steps())
    throw Error(ErrorCode::value, "distribution length does not match the number of steps");
  double total = 0.0;
  for (int s = 1; s <= table.n_steps(); ++s)
    total += distribution[static_cast<std::size_t>(s - 1)] * table.premium(s, base_premium);
  return total;
}

}  // namespace glmrate
