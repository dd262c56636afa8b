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

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "glmrate/design.hpp"
#include "glmrate/error.hpp"
#include "glmrate/fitter.hpp"
#include "glmrate/formula.hpp"
#include "glmrate/portfolio.hpp"
#include "glmrate/tariff.hpp"

using namespace glmrate;

namespace {

// Reference Fit3 estimates (region + type on the 54-cell portfolio).
const std::map<std::string, double> kFit3 = {
    {"(Intercept)", -3.03132}, {"region2", 0.23141}, {"region3", 0.46046}, {"type2", 0.39419}, {"type3", 0.58331}};

RateModel fit3_model() {
  const auto data = load_portfolio_file(GLMRATE_TEST_DATA);
  return RateModel::from_estimates(data.schema(), parse_formula("claims ~ region + type"), kFit3);
}

}  // namespace

TEST_CASE("rates from reference estimates") {
  const auto model = fit3_model();
  CHECK(predict_rate(model, {{"region", "1"}, {"type", "1"}}) == doctest::Approx(0.0482519036).epsilon(1e-9));
  CHECK(predict_rate(model, {{"region", "1"}, {"type", "2"}}) == doctest::Approx(0.0715663706).epsilon(1e-9));
  CHECK(predict_rate(model, {{"region", "2"}, {"type", "1"}}) == doctest::Approx(0.0608155).epsilon(1e-6));
  CHECK(years_to_one_claim(0.048252) == doctest::Approx(20.72453).epsilon(1e-6));
  // Factors outside the model are ignored.
  CHECK(predict_rate(model, {{"region", "1"}, {"type", "1"}, {"sex", "2"}}) ==
        predict_rate(model, {{"region", "1"}, {"type", "1"}}));
}

TEST_CASE("rate errors") {
  const auto model = fit3_model();
  CHECK_THROWS_AS(predict_rate(model, {{"region", "1"}}), Error);
  CHECK_THROWS_AS(predict_rate(model, {{"region", "7"}, {"type", "1"}}), Error);
  CHECK_THROWS_AS(years_to_one_claim(0.0), Error);
  const auto data = load_portfolio_file(GLMRATE_TEST_DATA);
  CHECK_THROWS_AS(RateModel::from_estimates(data.schema(), parse_formula("claims ~ region"), {{"region9", 1.0}}),
                  Error);
}

TEST_CASE("tariff table") {
  const auto table = build_tariff_table(fit3_model());
  REQUIRE(table.dimensions.size() == 2);
  REQUIRE(table.cells.size() == 9);
  CHECK(table.cells[0].levels == std::vector<std::string>{"1", "1"});
  CHECK(table.cells[1].levels == std::vector<std::string>{"1", "2"});
  CHECK(table.cells[0].relativity == 1.0);
  CHECK(table.cells[1].relativity == doctest::Approx(1.48318).epsilon(1e-5));
  CHECK(table.cells[3].annual_rate == doctest::Approx(0.0608155).epsilon(1e-6));

  // Multiplicative structure: rate(r, t) * rate(1, 1) = rate(r, 1) * rate(1, t).
  for (int r = 0; r < 3; ++r) {
    for (int t = 0; t < 3; ++t) {
      const double lhs = table.cells[3 * r + t].annual_rate * table.cells[0].annual_rate;
      const double rhs = table.cells[3 * r].annual_rate * table.cells[t].annual_rate;
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
      CHECK(table.cells[3 * r + t].years_to_one_claim * table.cells[3 * r + t].annual_rate ==
            doctest::Approx(1.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("tariff times exposure reproduces fitted means") {
  const std::string csv =
      "zone,car,claims,exposure\n"
      "a,s,12,140.5\n"
      "a,l,20,130\n"
      "b,s,15,90.25\n"
      "b,l,31,101\n"
      "c,s,3,20\n"
      "c,l,9,44\n";
  const auto data = load_portfolio(csv, infer_schema(csv));
  const auto result = fit(encode_design(data, parse_formula("claims ~ zone + car + offset(log(exposure))")),
                          Family::poisson());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Cell cell{{"zone", data.level_of(i, 0)}, {"car", data.level_of(i, 1)}};
    const double mu = result.fitted_means(static_cast<Eigen::Index>(i));
    CHECK(std::abs(predict_rate(result, cell) * data.rows()[i].exposure - mu) < 1e-10 * mu);
  }
}

TEST_CASE("degenerate tariffs") {
  const auto data = load_portfolio_file(GLMRATE_TEST_DATA);
  const auto null_model = fit(encode_design(data, parse_formula("claims ~ 1")), Family::poisson());
  const auto one = build_tariff_table(null_model);
  REQUIRE(one.cells.size() == 1);
  CHECK(one.cells[0].annual_rate == doctest::Approx(4715.0 / 54.0).epsilon(1e-10));

  const auto flat = RateModel::from_estimates(data.schema(), parse_formula("claims ~ region + type"), {});
  CHECK(predict_rate(flat, {{"region", "3"}, {"type", "2"}}) == 1.0);
}

TEST_CASE("tariff serialization") {
  const auto table = build_tariff_table(fit3_model());
  const auto csv = tariff_to_csv(table);
  CHECK(csv.rfind("region,type,annual_rate,years_to_one_claim,relativity\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);

  const auto json = nlohmann::json::parse(tariff_to_json(table));
  REQUIRE(json["cells"].size() == 9);
  CHECK(json["cells"][0]["levels"]["region"] == "1");
  CHECK(json["cells"][4]["annual_rate"].get<double>() == table.cells[4].annual_rate);
}
