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

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace glmrate {

/// Bonus-Malus ladder: premium percentage per step and the step reached
/// after a year with 0, 1, 2 or 3+ claims. Steps are numbered from 1 (the
/// malus step) to n_steps (the top bonus step).
class BonusMalusTable {
 public:
  static constexpr std::size_t kClaimCategories = 4;  // 0, 1, 2, >=3

  /// The 14-step table: 120% at step 1 down to 30% at step 14, entry at
  /// step 2.
  static BonusMalusTable standard();

  /// Parses and validates
  ///   {"steps": 14, "entry_step": 2, "percentages": [...],
  ///    "transitions": [[0 claims], [1 claim], [2 claims], [3+ claims]]}
  /// Throws ParseError for malformed JSON and Error(value) when the table
  /// breaks an invariant.
  static BonusMalusTable from_json(std::string_view text);

  /// Validates: every transition lands in 1..n; percentages strictly
  /// decrease; the 0-claim row is nondecreasing and maps n to n; the 3+ row
  /// maps everything to 1; more claims never lead to a better step.
  BonusMalusTable(std::vector<double> percentages,
                  std::array<std::vector<int>, kClaimCategories> transitions, int entry_step);

  int n_steps() const noexcept { return static_cast<int>(percentages_.size()); }
  int entry_step() const noexcept { return entry_step_; }

  /// Throws Error(value) for a step outside 1..n_steps.
  double percentage(int step) const;
  int next_step(int step, int claims) const;
  double premium(int step, double base_premium) const;

  /// Row-stochastic transition matrix (0-based states) when yearly claims are
  /// Poisson(lambda).
  Eigen::MatrixXd transition_matrix(double lambda) const;

  std::string to_json() const;

 private:
  void require_step(int step) const;

  std::vector<double> percentages_;
  std::array<std::vector<int>, kClaimCategories> transitions_;
  int entry_step_;
};

struct TrajectoryYear {
  int year = 0;            // 1-based
  int step_entering = 0;   // step that set this year's premium
  int claims = 0;
  int step_after = 0;
  double premium = 0.0;
};

/// Premium for year t is charged at the step held entering year t; the
/// year's claims then move the policy to `step_after`.
std::vector<TrajectoryYear> simulate_trajectory(const BonusMalusTable& table, int start_step,
                                                const std::vector<int>& yearly_claims, double base_premium);

/// Long-run step occupancy when yearly claims are Poisson(lambda), by power
/// iteration from the uniform vector until the L1 change is below 1e-12.
/// Entry i is the probability of step i + 1.
std::vector<double> stationary_distribution(const BonusMalusTable& table, double lambda);

/// sum_i pi_i * premium(i + 1, base_premium)
double expected_premium(const BonusMalusTable& table, const std::vector<double>& distribution,
                        double base_premium);

}  // namespace glmrate
