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
#include <string>

#include <doctest.h>

#include "glmrate/design.hpp"
#include "glmrate/error.hpp"
#include "glmrate/formula.hpp"
#include "glmrate/portfolio.hpp"

using namespace glmrate;

namespace {

PortfolioDataset from_csv(const std::string& csv) { return load_portfolio(csv, infer_schema(csv)); }

DesignMatrix encode(const PortfolioDataset& data, const std::string& formula) {
  return encode_design(data, parse_formula(formula));
}

const std::string kSmall =
    "a,b,claims,exposure\n"
    "1,x,3,2.0\n"
    "2,x,5,1.5\n"
    "1,y,0,0.5\n"
    "2,y,7,4.0\n";

}  // namespace

TEST_CASE("bundled portfolio") {
  const auto data = load_portfolio_file(GLMRATE_TEST_DATA);
  CHECK(data.size() == 54);
  REQUIRE(data.schema().factors.size() == 4);
  CHECK(data.schema().factors[0].name == "sex");
  CHECK(data.schema().factors[3].levels.size() == 3);
  CHECK(data.total_claims() == 4715.0);
  CHECK_FALSE(data.exposure_defaulted());
}

TEST_CASE("csv parsing") {
  SUBCASE("missing exposure column defaults to one") {
    const auto data = from_csv("a,claims\n1,4\n2,6\n");
    CHECK(data.exposure_defaulted());
    CHECK(data.rows()[1].exposure == 1.0);
  }
  SUBCASE("header only is an empty dataset") {
    const auto data = from_csv("a,claims,exposure\n");
    CHECK(data.empty());
    CHECK_THROWS_AS(encode(data, "claims ~ 1"), Error);
  }
  SUBCASE("quoted fields, BOM and blank lines") {
    const auto data = from_csv("\xEF\xBB\xBF\"a\",claims\n\n\"1\",4\n");
    CHECK(data.size() == 1);
    CHECK(data.level_of(0, 0) == "1");
  }
  SUBCASE("negative count") {
    try {
      from_csv("a,claims\n1,-2\n");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::value);
    }
  }
  SUBCASE("non-numeric count carries its location") {
    try {
      from_csv("a,claims\n1,4\n2,four\n");
      FAIL("expected an error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
      CHECK(e.column() == 2);
    }
  }
  SUBCASE("ragged row") {
    CHECK_THROWS_AS(from_csv("a,claims\n1,4,5\n"), ParseError);
  }
  SUBCASE("level outside a fixed schema") {
    const auto schema = infer_schema("a,claims\n1,0\n2,0\n");
    try {
      load_portfolio(std::string("a,claims\n3,1\n"), schema);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::schema);
      CHECK(std::string(e.what()).find("'3'") != std::string::npos);
    }
  }
  SUBCASE("numeric levels sort numerically") {
    const auto schema = infer_schema("a,claims\n10,0\n9,0\n2,0\n");
    CHECK(schema.factors[0].levels == std::vector<std::string>{"2", "9", "10"});
  }
}

TEST_CASE("formula parsing") {
  const auto f = parse_formula("claims ~ region*type + offset(log(exposure))");
  CHECK(f.response == "claims");
  REQUIRE(f.terms.size() == 4);
  CHECK(f.terms[0] == Term::intercept());
  CHECK(f.terms[1] == Term::main_effect("region"));
  CHECK(f.terms[2] == Term::main_effect("type"));
  CHECK(f.terms[3] == Term::interaction("region", "type"));
  CHECK(f.offset_log_column == "exposure");

  CHECK(parse_formula("claims ~ a + a + b:a + a:b").terms.size() == 3);
  CHECK(parse_formula("claims ~ 1").terms.size() == 1);
  CHECK(Term::interaction("b", "a").key() == Term::interaction("a", "b").key());

  try {
    parse_formula("claims ~ ~ region");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.column() == 9);
  }
  CHECK_THROWS_AS(parse_formula("claims ~ a:a"), ParseError);
  CHECK_THROWS_AS(parse_formula("claims ~ a:b:c"), ParseError);
  CHECK_THROWS_AS(parse_formula("claims ~ a + offset(log(e)) + offset(log(e))"), ParseError);
  CHECK_THROWS_AS(parse_formula("claims ~ a +"), ParseError);
  CHECK_THROWS_AS(parse_formula("claims region"), ParseError);
}

TEST_CASE("design encoding on the bundled portfolio") {
  const auto data = load_portfolio_file(GLMRATE_TEST_DATA);

  const auto fit1 = encode(data, "claims ~ sex + region + type + job");
  CHECK(fit1.rows() == 54);
  CHECK(fit1.cols() == 8);
  CHECK(fit1.column_labels() == std::vector<std::string>{"(Intercept)", "sex2", "region2", "region3", "type2",
                                                         "type3", "job2", "job3"});
  CHECK(fit1.has_intercept());

  const auto fit4 = encode(data, "claims ~ region * type");
  CHECK(fit4.cols() == 9);
  CHECK(fit4.column_labels()[5] == "region2:type2");
  CHECK(fit4.column_labels()[8] == "region3:type3");

  const auto null_model = encode(data, "claims ~ 1");
  CHECK(null_model.cols() == 1);
  CHECK(null_model.matrix().isOnes());

  SUBCASE("dummy blocks are 0/1 with at most one active column per factor") {
    const auto& x = fit1.matrix();
    CHECK((x.array() * (x.array() - 1.0)).abs().maxCoeff() == 0.0);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      CHECK(x.block(i, 2, 1, 2).sum() <= 1.0);
      CHECK(x.block(i, 4, 1, 2).sum() <= 1.0);
      CHECK(x.block(i, 6, 1, 2).sum() <= 1.0);
    }
    // Each non-reference level appears in one third of the 54 cells (sex: half).
    CHECK(x.col(1).sum() == 27.0);
    CHECK(x.col(2).sum() == 18.0);
  }
  SUBCASE("deterministic") {
    const auto again = encode(data, "claims ~ sex + region + type + job");
    CHECK(again.matrix() == fit1.matrix());
    CHECK(again.data_fingerprint() == fit1.data_fingerprint());
  }
  SUBCASE("unknown factor") {
    try {
      encode(data, "claims ~ age");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::schema);
      CHECK(std::string(e.what()).find("age") != std::string::npos);
    }
  }
  SUBCASE("response must be the claims column") {
    CHECK_THROWS_AS(encode(data, "exposure ~ region"), Error);
  }
}

TEST_CASE("offset column") {
  const auto data = from_csv(kSmall);
  const auto d = encode(data, "claims ~ a + offset(log(exposure))");
  CHECK(d.offset()(0) == doctest::Approx(std::log(2.0)));
  CHECK(d.offset()(2) == doctest::Approx(std::log(0.5)));
  CHECK(encode(data, "claims ~ a").offset().isZero());
  CHECK_THROWS_AS(encode(data, "claims ~ a + offset(log(b))"), Error);
}

TEST_CASE("dummy trap is reported as a rank error") {
  // Factor c is factor a under another name.
  const auto data = from_csv("a,c,claims\n1,p,3\n2,q,4\n1,p,5\n2,q,9\n");
  try {
    encode(data, "claims ~ a + c");
    FAIL("expected a rank error");
  } catch (const RankError& e) {
    CHECK(e.code() == ErrorCode::rank);
    CHECK(std::string(e.what()).find("cq") != std::string::npos);
  }
}

TEST_CASE("dependent column detection") {
  Eigen::MatrixXd x(4, 3);
  x << 1, 1, 0, 1, 0, 1, 1, 1, 0, 1, 0, 1;
  CHECK(dependent_columns(x, {"(Intercept)", "u", "v"}) == std::vector<std::string>{"v"});
  CHECK(dependent_columns(x.leftCols(2), {"(Intercept)", "u"}).empty());
}

TEST_CASE("design matrix validation") {
  Eigen::MatrixXd x = Eigen::MatrixXd::Ones(2, 1);
  Eigen::VectorXd y(2);
  y << 1, 2;
  CHECK_THROWS_AS(DesignMatrix(x, {"a", "b"}, y), Error);
  CHECK_THROWS_AS(DesignMatrix(x, {"a"}, Eigen::VectorXd::Ones(3)), Error);
  Eigen::VectorXd w(2);
  w << 1, 0;
  CHECK_THROWS_AS(DesignMatrix(x, {"a"}, y, Eigen::VectorXd::Zero(2), w), Error);
}
