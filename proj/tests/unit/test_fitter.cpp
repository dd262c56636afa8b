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
#include <random>
#include <set>

#include <doctest.h>

#include "glmrate/design.hpp"
#include "glmrate/error.hpp"
#include "glmrate/fitter.hpp"
#include "glmrate/formula.hpp"
#include "glmrate/portfolio.hpp"
#include "oracles.hpp"

using namespace glmrate;

namespace {

DesignMatrix column_of_ones(std::initializer_list<double> y, double offset = 0.0) {
  const auto n = static_cast<Eigen::Index>(y.size());
  Eigen::VectorXd response(n);
  Eigen::Index i = 0;
  for (double v : y) response(i++) = v;
  return DesignMatrix(Eigen::MatrixXd::Ones(n, 1), {"(Intercept)"}, response, Eigen::VectorXd::Constant(n, offset));
}

FitResult fit_bundled(const PortfolioDataset& data, const std::string& formula) {
  return fit(encode_design(data, parse_formula(formula)), Family::poisson());
}

}  // namespace

TEST_CASE("closed-form one-parameter fits") {
  const auto normal = fit(column_of_ones({1, 2, 3}), Family::normal());
  CHECK(normal.coefficients(0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(normal.deviance == doctest::Approx(2.0));

  const auto poisson = fit(column_of_ones({2, 4}), Family::poisson());
  CHECK(poisson.converged);
  CHECK(poisson.coefficients(0) == doctest::Approx(std::log(3.0)).epsilon(1e-10));
  CHECK(poisson.fitted_means(0) == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(poisson.deviance == doctest::Approx(0.679596147).epsilon(1e-8));
  CHECK(poisson.log_likelihood == doctest::Approx(-3.279527279).epsilon(1e-8));
  CHECK(poisson.aic == doctest::Approx(2 * 3.279527279 + 2).epsilon(1e-8));
  CHECK(poisson.df_residual == 1);
  CHECK(poisson.null_deviance == doctest::Approx(poisson.deviance));

  const auto with_offset = fit(column_of_ones({2, 4}, std::log(10.0)), Family::poisson());
  CHECK(with_offset.coefficients(0) == doctest::Approx(std::log(0.3)).epsilon(1e-10));
}

TEST_CASE("standard errors come from the Fisher information") {
  // One parameter: Var(beta) = 1 / sum(mu) = 1/6.
  const auto f = fit(column_of_ones({2, 4}), Family::poisson());
  CHECK(f.std_errors(0) == doctest::Approx(std::sqrt(1.0 / 6.0)).epsilon(1e-9));
  CHECK(f.z_values(0) == doctest::Approx(std::log(3.0) / std::sqrt(1.0 / 6.0)).epsilon(1e-9));
}

TEST_CASE("IRLS agrees with a brute-force maximum likelihood oracle") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::uniform_int_distribution<int> size(3, 6);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = size(rng);
    Eigen::MatrixXd x(n, 2);
    Eigen::VectorXd y(n), offset(n);
    for (int i = 0; i < n; ++i) {
      x(i, 0) = 1.0;
      x(i, 1) = unif(rng);
      offset(i) = 0.5 * unif(rng);
      std::poisson_distribution<int> draw(std::exp(1.2 + 0.8 * x(i, 1) + offset(i)));
      y(i) = draw(rng);
    }
    if (y.sum() == 0.0) continue;  // MLE does not exist
    const auto result = fit(DesignMatrix(x, {"(Intercept)", "x"}, y, offset), Family::poisson());
    const auto expected = oracle::poisson_mle(x, y, offset);
    CHECK((result.coefficients - expected).cwiseAbs().maxCoeff() < 1e-6);
    ++checked;
  }
  CHECK(checked >= 50);
}

TEST_CASE("normal identity fit equals weighted least squares") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::uniform_real_distribution<double> weight(0.5, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 12;
    Eigen::MatrixXd x(n, 3);
    Eigen::VectorXd y(n), w(n);
    for (int i = 0; i < n; ++i) {
      x.row(i) << 1.0, noise(rng), noise(rng);
      y(i) = 2.0 - x(i, 1) + 0.5 * x(i, 2) + noise(rng);
      w(i) = weight(rng);
    }
    const auto result = fit(DesignMatrix(x, {"(Intercept)", "u", "v"}, y, Eigen::VectorXd::Zero(n), w),
                            Family::normal());
    CHECK((result.coefficients - oracle::weighted_least_squares(x, y, w)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("fits on the bundled portfolio") {
  const auto data = load_portfolio_file(GLMRATE_TEST_DATA);
  const auto fit1 = fit_bundled(data, "claims ~ sex + region + type + job");
  CHECK(fit1.converged);
  CHECK(fit1.df_residual == 46);
  CHECK(fit1.df_null == 53);

  SUBCASE("canonical link reproduces observed margins") {
    const auto& factors = data.schema().factors;
    for (std::size_t f = 0; f < factors.size(); ++f) {
      for (std::size_t level = 0; level < factors[f].levels.size(); ++level) {
        double observed = 0.0, fitted = 0.0;
        for (std::size_t i = 0; i < data.size(); ++i) {
          if (data.rows()[i].levels[f] != level) continue;
          observed += data.rows()[i].claims;
          fitted += fit1.fitted_means(static_cast<Eigen::Index>(i));
        }
        CHECK(std::abs(fitted - observed) <= 1e-6 * observed);
      }
    }
  }

  SUBCASE("AIC minus deviance minus 2p depends only on the data") {
    const auto c1 = fit1.aic - fit1.deviance - 2.0 * fit1.n_parameters();
    for (const char* formula : {"claims ~ region + type + job", "claims ~ region + type", "claims ~ region * type",
                                "claims ~ 1"}) {
      const auto other = fit_bundled(data, formula);
      CHECK(other.aic - other.deviance - 2.0 * other.n_parameters() == doctest::Approx(c1).epsilon(1e-10));
    }
  }

  SUBCASE("deviance pair and log-likelihood helpers agree with the fit") {
    const auto design = encode_design(data, parse_formula("claims ~ sex + region + type + job"));
    CHECK(log_likelihood(fit1, design, Family::poisson()) == doctest::Approx(fit1.log_likelihood));
    const auto [d, scaled] = deviance_pair(fit1, Family::poisson());
    CHECK(d == doctest::Approx(fit1.deviance));
    CHECK(scaled == doctest::Approx(fit1.scaled_deviance));
  }

  SUBCASE("deviance trace is nonincreasing after the first iterate") {
    // Entry 0 is the deviance at the starting means, which is not a model point.
    for (std::size_t i = 2; i < fit1.deviance_trace.size(); ++i)
      CHECK(fit1.deviance_trace[i] <= fit1.deviance_trace[i - 1] * (1 + 1e-12));
  }
}

TEST_CASE("constant offset shifts only the intercept") {
  const auto data = load_portfolio_file(GLMRATE_TEST_DATA);
  auto design = encode_design(data, parse_formula("claims ~ region + type"));
  const auto base = fit(design, Family::poisson());
  const double shift = 1.7;
  const DesignMatrix shifted(design.matrix(), design.column_labels(), design.response(),
                             design.offset().array() + shift, design.weights(), design.structure());
  const auto moved = fit(shifted, Family::poisson());
  CHECK(std::abs(moved.coefficients(0) - (base.coefficients(0) - shift)) < 1e-10);
  CHECK((moved.coefficients.tail(4) - base.coefficients.tail(4)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((moved.fitted_means - base.fitted_means).cwiseAbs().maxCoeff() < 1e-10 * base.fitted_means.maxCoeff());
  CHECK(moved.deviance == doctest::Approx(base.deviance).epsilon(1e-10));
}

TEST_CASE("saturated model has zero deviance") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> count(1, 40);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 5;
    Eigen::MatrixXd x = Eigen::MatrixXd::Identity(n, n);
    x.col(0).setOnes();
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) y(i) = count(rng);
    const auto p = fit(DesignMatrix(x, {"(Intercept)", "b", "c", "d", "e"}, y), Family::poisson());
    CHECK(std::abs(p.deviance) < 1e-9);
    CHECK(p.df_residual == 0);
    const auto g = fit(DesignMatrix(x, {"(Intercept)", "b", "c", "d", "e"}, y), Family::normal());
    CHECK(std::abs(g.deviance) < 1e-9);
  }
}

TEST_CASE("fit errors") {
  SUBCASE("negative Poisson response") {
    try {
      fit(column_of_ones({1, -1}), Family::poisson());
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::domain);
    }
  }
  SUBCASE("rank deficient design") {
    Eigen::MatrixXd x(3, 2);
    x << 1, 2, 1, 2, 1, 2;
    try {
      fit(DesignMatrix(x, {"a", "b"}, Eigen::VectorXd::Ones(3)), Family::poisson());
      FAIL("expected a rank error");
    } catch (const RankError& e) {
      CHECK(std::string(e.what()).find(": b") != std::string::npos);
    }
  }
  SUBCASE("iteration budget exhausted") {
    const auto data = load_portfolio_file(GLMRATE_TEST_DATA);
    const auto design = encode_design(data, parse_formula("claims ~ region + type"));
    FitControls tight;
    tight.max_iterations = 1;
    try {
      fit(design, Family::poisson(), tight);
      FAIL("expected a convergence error");
    } catch (const ConvergenceError& e) {
      CHECK(e.code() == ErrorCode::convergence);
      CHECK_FALSE(e.deviance_trace().empty());
    }
  }
}

TEST_CASE("Wald statistics") {
  const auto a = wald(0.46434, 0.09655);
  CHECK(a.z_value == doctest::Approx(4.80932).epsilon(1e-5));
  CHECK(a.p_value == doctest::Approx(1.51443e-6).epsilon(1e-4));
  const auto b = wald(0.10303, 0.07634);
  CHECK(b.z_value == doctest::Approx(1.34962).epsilon(1e-5));
  CHECK(b.p_value == doctest::Approx(0.177138).epsilon(1e-5));
  const auto zero = wald(0.0, 0.2);
  CHECK(zero.z_value == 0.0);
  CHECK(zero.p_value == 1.0);
  CHECK(wald(-0.46434, 0.09655).p_value == doctest::Approx(a.p_value));
}
