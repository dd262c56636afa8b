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

#include <cmath>
#include <vector>

#include <doctest.h>

#include "glmrate/design.hpp"
#include "glmrate/distributions.hpp"
#include "glmrate/error.hpp"
#include "glmrate/fitter.hpp"
#include "glmrate/formula.hpp"
#include "glmrate/inference.hpp"
#include "glmrate/portfolio.hpp"
#include "oracles.hpp"

using namespace glmrate;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected glmrate::Error");
  return ErrorCode::io;
}

}  // namespace

TEST_CASE("chi-square golden values") {
  CHECK(std::abs(chi_square_sf(41.93, 46) - 0.64335062) < 1e-7);
  CHECK(std::abs(chi_square_sf(43.755, 47) - 0.60776251) < 1e-7);
  CHECK(std::abs(chi_square_sf(44.94, 49) - 0.63838553) < 1e-7);
  CHECK(std::abs(chi_square_sf(1.825, 1) - 0.176719) < 1e-6);
  CHECK(std::abs(chi_square_sf(2.528, 4) - 0.639629) < 1e-6);
  CHECK(std::abs(chi_square_quantile(0.05, 1) - 3.8414588) < 1e-6);
  CHECK(std::abs(chi_square_quantile(0.05, 4) - 9.4877290) < 1e-6);
}

TEST_CASE("chi-square survival matches closed forms") {
  for (int df = 1; df <= 60; ++df) {
    for (double x : {0.01, 0.5, 1.0, 3.0, 10.0, 25.0, 45.0, 80.0, 150.0}) {
      const double expected = oracle::chi_square_sf(x, df);
      CHECK(std::abs(chi_square_sf(x, df) - expected) <= 1e-10 * std::max(1.0, expected) + 1e-300);
    }
  }
}

TEST_CASE("chi-square quantile inverts the survival function") {
  for (int df = 1; df <= 60; ++df) {
    for (double alpha : {0.01, 0.05, 0.5, 0.9}) {
      const double q = chi_square_quantile(alpha, df);
      CHECK(std::abs(q - oracle::chi_square_quantile(alpha, df)) < 1e-7 * std::max(1.0, q));
      CHECK(std::abs(chi_square_sf(q, df) - alpha) < 1e-7);
    }
  }
}

TEST_CASE("chi-square survival is monotone") {
  for (int df : {1, 2, 7, 46}) {
    double last = 1.0;
    for (double x = 0.0; x < 120.0; x += 0.37) {
      const double s = chi_square_sf(x, df);
      CHECK(s <= last);
      last = s;
    }
  }
  CHECK(chi_square_sf(0.0, 3) == 1.0);
}

TEST_CASE("distribution argument checks") {
  CHECK(code_of([] { chi_square_sf(1.0, 0); }) == ErrorCode::domain);
  CHECK(code_of([] { chi_square_quantile(1.5, 3); }) == ErrorCode::domain);
  CHECK(standard_normal_sf(0.0) == doctest::Approx(0.5));
}

TEST_CASE("goodness of fit") {
  const auto r = goodness_of_fit(41.93, 46);
  CHECK(r.p_value == doctest::Approx(0.6433506).epsilon(1e-6));
  CHECK(r.decision == Decision::fail_to_reject);
  CHECK(r.critical_value == doctest::Approx(oracle::chi_square_quantile(0.05, 46)).epsilon(1e-8));

  const auto bad = goodness_of_fit(100.0, 10);
  CHECK(bad.decision == Decision::reject);
  CHECK(bad.p_value < 1e-15);

  CHECK(code_of([] { goodness_of_fit(1.0, 0); }) == ErrorCode::value);
  CHECK(code_of([] { goodness_of_fit(1.0, 5, 0.0); }) == ErrorCode::value);
}

TEST_CASE("nested comparison from deviances") {
  const auto drop_sex = compare_nested(43.755, 7, 41.93, 8);
  CHECK(drop_sex.statistic == doctest::Approx(1.825));
  CHECK(drop_sex.df == 1);
  CHECK(drop_sex.decision == Decision::fail_to_reject);
  CHECK(drop_sex.critical_value == doctest::Approx(3.8414588).epsilon(1e-7));

  const auto interaction = compare_nested(44.94, 5, 42.412, 9);
  CHECK(interaction.statistic == doctest::Approx(2.528));
  CHECK(interaction.df == 4);
  CHECK(interaction.decision == Decision::fail_to_reject);

  CHECK(compare_nested(10.0, 2, 10.0 + 1e-13, 3).statistic == 0.0);
  CHECK(code_of([] { compare_nested(5.0, 3, 4.0, 3); }) == ErrorCode::nesting);
  CHECK(code_of([] { compare_nested(5.0, 4, 4.0, 3); }) == ErrorCode::nesting);
}

TEST_CASE("nested comparison from fits") {
  const auto data = load_portfolio_file(GLMRATE_TEST_DATA);
  auto fit_of = [&](const char* formula) {
    return fit(encode_design(data, parse_formula(formula)), Family::poisson());
  };
  const auto fit3 = fit_of("claims ~ region + type");
  const auto fit4 = fit_of("claims ~ region * type");
  const auto r = compare_nested(fit3, fit4);
  CHECK(r.df == 4);
  CHECK(r.statistic == doctest::Approx(fit3.scaled_deviance - fit4.scaled_deviance));

  CHECK(code_of([&] { compare_nested(fit3, fit3); }) == ErrorCode::nesting);
  CHECK(code_of([&] { compare_nested(fit4, fit3); }) == ErrorCode::nesting);
  // Same parameter count difference but not a subset of terms.
  CHECK(code_of([&] { compare_nested(fit_of("claims ~ sex + job"), fit4); }) == ErrorCode::nesting);

  const auto null_model = fit_of("claims ~ 1");
  CHECK(compare_nested(null_model, fit3).df == 4);
}

TEST_CASE("models fitted to different data are not comparable") {
  const std::string a = "g,claims\n1,3\n2,5\n1,4\n2,9\n";
  const std::string b = "g,claims\n1,3\n2,5\n1,4\n2,8\n";
  auto fit_csv = [](const std::string& csv, const char* formula) {
    return fit(encode_design(load_portfolio(csv, infer_schema(csv)), parse_formula(formula)), Family::poisson());
  };
  const auto reduced = fit_csv(a, "claims ~ 1");
  const auto full = fit_csv(b, "claims ~ g");
  CHECK(code_of([&] { compare_nested(reduced, full); }) == ErrorCode::nesting);
  const std::vector<FitResult> both{reduced, full};
  CHECK(code_of([&] { select_by_aic(std::span<const FitResult>(both)); }) == ErrorCode::nesting);
}

TEST_CASE("AIC selection") {
  const std::vector<AicCandidate> candidates{{288.24, 8}, {288.06, 7}, {285.25, 5}, {290.72, 9}};
  CHECK(select_by_aic(std::span<const AicCandidate>(candidates)) == 2);
  const std::vector<AicCandidate> tie{{10.0, 4}, {10.0, 3}, {10.0, 3}};
  CHECK(select_by_aic(std::span<const AicCandidate>(tie)) == 1);
  CHECK(code_of([] { select_by_aic(std::span<const AicCandidate>()); }) == ErrorCode::value);
}
