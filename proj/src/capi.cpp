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

#include "glmrate/glmrate.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "glmrate/bonus_malus.hpp"
#include "glmrate/design.hpp"
#include "glmrate/error.hpp"
#include "glmrate/fitter.hpp"
#include "glmrate/formula.hpp"
#include "glmrate/inference.hpp"
#include "glmrate/portfolio.hpp"
#include "glmrate/report.hpp"
#include "glmrate/tariff.hpp"

struct glmr_dataset {
  glmrate::PortfolioDataset data;
};

struct glmr_fit {
  glmrate::FitResult result;
  std::string formula;
};

struct glmr_bm_table {
  glmrate::BonusMalusTable table;
};

namespace {

thread_local std::string last_error;

glmr_status map_code(glmrate::ErrorCode code) {
  using glmrate::ErrorCode;
  switch (code) {
    case ErrorCode::parse: return GLMR_ERR_PARSE;
    case ErrorCode::schema: return GLMR_ERR_SCHEMA;
    case ErrorCode::value: return GLMR_ERR_VALUE;
    case ErrorCode::domain: return GLMR_ERR_DOMAIN;
    case ErrorCode::rank: return GLMR_ERR_RANK;
    case ErrorCode::convergence: return GLMR_ERR_CONVERGENCE;
    case ErrorCode::nesting: return GLMR_ERR_NESTING;
    case ErrorCode::io: return GLMR_ERR_IO;
  }
  return GLMR_ERR_INTERNAL;
}

glmr_status fail(glmr_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
glmr_status guarded(F&& body) {
  try {
    body();
    return GLMR_OK;
  } catch (const glmrate::Error& e) {
    return fail(map_code(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(GLMR_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(GLMR_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(GLMR_ERR_INTERNAL, "unknown error");
  }
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

glmr_status emit(const glmrate::ReportDocument& doc, glmr_format format, char** out) {
  if (format == GLMR_FORMAT_JSON) {
    *out = duplicate(glmrate::render_json(doc));
    return GLMR_OK;
  }
  if (format == GLMR_FORMAT_TEXT) {
    *out = duplicate(glmrate::render_plain(doc));
    return GLMR_OK;
  }
  return fail(GLMR_ERR_ARGUMENT, "format not supported for this report");
}

void fill(const glmrate::TestReport& r, glmr_test_result* out) {
  out->statistic = r.statistic;
  out->df = r.df;
  out->p_value = r.p_value;
  out->alpha = r.alpha;
  out->critical_value = r.critical_value;
  out->reject = r.decision == glmrate::Decision::reject ? 1 : 0;
}

#define GLMR_REQUIRE(cond, what) \
  do {                           \
    if (!(cond)) return fail(GLMR_ERR_ARGUMENT, what); \
  } while (0)

}  // namespace

extern "C" {

const char* glmr_version(void) { return "0.1.0"; }

const char* glmr_last_error(void) { return last_error.c_str(); }

const char* glmr_status_name(glmr_status status) {
  switch (status) {
    case GLMR_OK: return "ok";
    case GLMR_ERR_PARSE: return "parse error";
    case GLMR_ERR_SCHEMA: return "schema error";
    case GLMR_ERR_VALUE: return "value error";
    case GLMR_ERR_DOMAIN: return "domain error";
    case GLMR_ERR_RANK: return "rank error";
    case GLMR_ERR_CONVERGENCE: return "convergence error";
    case GLMR_ERR_NESTING: return "nesting error";
    case GLMR_ERR_IO: return "i/o error";
    case GLMR_ERR_ARGUMENT: return "invalid argument";
    case GLMR_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void glmr_string_free(char* s) { std::free(s); }

glmr_status glmr_dataset_load_file(const char* path, glmr_dataset** out) {
  GLMR_REQUIRE(path && out, "path and out must not be null");
  *out = nullptr;
  return guarded([&] { *out = new glmr_dataset{glmrate::load_portfolio_file(path)}; });
}

glmr_status glmr_dataset_load_csv(const char* data, size_t length, glmr_dataset** out) {
  GLMR_REQUIRE((data || length == 0) && out, "data and out must not be null");
  *out = nullptr;
  return guarded([&] {
    const std::string_view text(data ? data : "", length);
    *out = new glmr_dataset{glmrate::load_portfolio(text, glmrate::infer_schema(text))};
  });
}

size_t glmr_dataset_rows(const glmr_dataset* ds) { return ds ? ds->data.size() : 0; }

double glmr_dataset_total_claims(const glmr_dataset* ds) { return ds ? ds->data.total_claims() : 0.0; }

int glmr_dataset_exposure_defaulted(const glmr_dataset* ds) { return ds && ds->data.exposure_defaulted() ? 1 : 0; }

void glmr_dataset_free(glmr_dataset* ds) { delete ds; }

glmr_status glmr_fit_formula(const glmr_dataset* ds, const char* formula, const char* family, glmr_fit** out) {
  GLMR_REQUIRE(ds && formula && out, "dataset, formula and out must not be null");
  *out = nullptr;
  return guarded([&] {
    const auto fam = glmrate::family_from_name(family ? family : "poisson");
    const auto parsed = glmrate::parse_formula(formula);
    const auto design = glmrate::encode_design(ds->data, parsed);
    *out = new glmr_fit{glmrate::fit(design, fam), formula};
  });
}

glmr_status glmr_fit_matrix(size_t n, size_t p, const double* x, const double* y, const double* offset,
                            const double* weights, const char* const* labels, const char* family, glmr_fit** out) {
  GLMR_REQUIRE(x && y && out, "x, y and out must not be null");
  *out = nullptr;
  return guarded([&] {
    const auto rows = static_cast<Eigen::Index>(n);
    const auto cols = static_cast<Eigen::Index>(p);
    Eigen::MatrixXd m = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        x, rows, cols);
    Eigen::VectorXd yy = Eigen::Map<const Eigen::VectorXd>(y, rows);
    Eigen::VectorXd off = offset ? Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(offset, rows)) : Eigen::VectorXd();
    Eigen::VectorXd w = weights ? Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(weights, rows)) : Eigen::VectorXd();
    std::vector<std::string> names;
    for (size_t j = 0; j < p; ++j) names.push_back(labels ? labels[j] : "x" + std::to_string(j + 1));
    const glmrate::DesignMatrix design(std::move(m), std::move(names), std::move(yy), std::move(off), std::move(w));
    *out = new glmr_fit{glmrate::fit(design, glmrate::family_from_name(family ? family : "poisson")), "<matrix>"};
  });
}

void glmr_fit_free(glmr_fit* fit) { delete fit; }

glmr_status glmr_fit_summary_get(const glmr_fit* fit, glmr_fit_summary* out) {
  GLMR_REQUIRE(fit && out, "fit and out must not be null");
  const auto& r = fit->result;
  out->n_observations = r.n_observations();
  out->n_parameters = r.n_parameters();
  out->deviance = r.deviance;
  out->scaled_deviance = r.scaled_deviance;
  out->null_deviance = r.null_deviance;
  out->df_residual = r.df_residual;
  out->df_null = r.df_null;
  out->log_likelihood = r.log_likelihood;
  out->aic = r.aic;
  out->iterations = r.n_iterations;
  out->converged = r.converged ? 1 : 0;
  return GLMR_OK;
}

glmr_status glmr_fit_coefficient(const glmr_fit* fit, size_t index, glmr_coefficient* out) {
  GLMR_REQUIRE(fit && out, "fit and out must not be null");
  const auto& r = fit->result;
  if (index >= r.n_parameters()) return fail(GLMR_ERR_ARGUMENT, "coefficient index out of range");
  const auto i = static_cast<Eigen::Index>(index);
  out->label = r.labels[index].c_str();
  out->estimate = r.coefficients[i];
  out->std_error = r.std_errors[i];
  out->z_value = r.z_values[i];
  out->p_value = r.p_values[i];
  return GLMR_OK;
}

glmr_status glmr_fit_fitted_means(const glmr_fit* fit, double* out, size_t capacity) {
  GLMR_REQUIRE(fit && out, "fit and out must not be null");
  const auto& mu = fit->result.fitted_means;
  if (capacity < static_cast<size_t>(mu.size())) return fail(GLMR_ERR_ARGUMENT, "output buffer too small");
  std::copy(mu.data(), mu.data() + mu.size(), out);
  return GLMR_OK;
}

glmr_status glmr_fit_report(const glmr_fit* fit, glmr_format format, char** out) {
  GLMR_REQUIRE(fit && out, "fit and out must not be null");
  *out = nullptr;
  glmr_status status = GLMR_OK;
  const auto rc = guarded([&] { status = emit(glmrate::fit_report(fit->result, fit->formula), format, out); });
  return rc != GLMR_OK ? rc : status;
}

glmr_status glmr_chi_square_sf(double x, int df, double* out) {
  GLMR_REQUIRE(out, "out must not be null");
  return guarded([&] { *out = glmrate::chi_square_sf(x, df); });
}

glmr_status glmr_chi_square_quantile(double alpha, int df, double* out) {
  GLMR_REQUIRE(out, "out must not be null");
  return guarded([&] { *out = glmrate::chi_square_quantile(alpha, df); });
}

double glmr_standard_normal_sf(double z) { return glmrate::standard_normal_sf(z); }

glmr_status glmr_goodness_of_fit(const glmr_fit* fit, double alpha, glmr_test_result* out) {
  GLMR_REQUIRE(fit && out, "fit and out must not be null");
  return guarded([&] { fill(glmrate::goodness_of_fit(fit->result, alpha), out); });
}

glmr_status glmr_compare_nested(const glmr_fit* reduced, const glmr_fit* full, double alpha,
                                glmr_test_result* out) {
  GLMR_REQUIRE(reduced && full && out, "fits and out must not be null");
  return guarded([&] { fill(glmrate::compare_nested(reduced->result, full->result, alpha), out); });
}

glmr_status glmr_compare_report(const glmr_fit* reduced, const glmr_fit* full, double alpha, glmr_format format,
                                char** out) {
  GLMR_REQUIRE(reduced && full && out, "fits and out must not be null");
  *out = nullptr;
  glmr_status status = GLMR_OK;
  const auto rc = guarded([&] {
    const auto test = glmrate::compare_nested(reduced->result, full->result, alpha);
    status = emit(glmrate::compare_report(reduced->result, reduced->formula, full->result, full->formula, test),
                  format, out);
  });
  return rc != GLMR_OK ? rc : status;
}

glmr_status glmr_select_by_aic(const glmr_fit* const* fits, size_t count, size_t* best) {
  GLMR_REQUIRE(best && (fits || count == 0), "fits and best must not be null");
  return guarded([&] {
    std::vector<glmrate::FitResult> results;
    for (size_t i = 0; i < count; ++i) {
      if (!fits[i]) throw glmrate::Error(glmrate::ErrorCode::value, "null fit in list");
      results.push_back(fits[i]->result);
    }
    *best = glmrate::select_by_aic(std::span<const glmrate::FitResult>(results));
  });
}

glmr_status glmr_predict_rate(const glmr_fit* fit, const char* const* factors, const char* const* levels,
                              size_t count, double* out) {
  GLMR_REQUIRE(fit && out && ((factors && levels) || count == 0), "fit, cell arrays and out must not be null");
  return guarded([&] {
    glmrate::Cell cell;
    for (size_t i = 0; i < count; ++i) cell[factors[i]] = levels[i];
    *out = glmrate::predict_rate(fit->result, cell);
  });
}

glmr_status glmr_tariff_render(const glmr_fit* fit, glmr_format format, char** out) {
  GLMR_REQUIRE(fit && out, "fit and out must not be null");
  *out = nullptr;
  return guarded([&] {
    const auto table = glmrate::build_tariff_table(fit->result);
    switch (format) {
      case GLMR_FORMAT_CSV: *out = duplicate(glmrate::tariff_to_csv(table)); break;
      case GLMR_FORMAT_JSON: *out = duplicate(glmrate::tariff_to_json(table)); break;
      default: *out = duplicate(glmrate::render_plain(glmrate::tariff_report(table))); break;
    }
  });
}

glmr_status glmr_tariff_write(const glmr_fit* fit, const char* path, glmr_format format) {
  GLMR_REQUIRE(fit && path, "fit and path must not be null");
  if (format != GLMR_FORMAT_CSV && format != GLMR_FORMAT_JSON)
    return fail(GLMR_ERR_ARGUMENT, "tariff files are written as CSV or JSON");
  return guarded([&] {
    const auto table = glmrate::build_tariff_table(fit->result);
    const std::string body =
        format == GLMR_FORMAT_CSV ? glmrate::tariff_to_csv(table) : glmrate::tariff_to_json(table);
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw glmrate::Error(glmrate::ErrorCode::io, std::string("cannot write '") + path + "'");
    file << body;
    file.close();
    if (!file) throw glmrate::Error(glmrate::ErrorCode::io, std::string("failed writing '") + path + "'");
  });
}

glmr_status glmr_bm_table_standard(glmr_bm_table** out) {
  GLMR_REQUIRE(out, "out must not be null");
  return guarded([&] { *out = new glmr_bm_table{glmrate::BonusMalusTable::standard()}; });
}

glmr_status glmr_bm_table_from_json(const char* text, size_t length, glmr_bm_table** out) {
  GLMR_REQUIRE(text && out, "text and out must not be null");
  *out = nullptr;
  return guarded(
      [&] { *out = new glmr_bm_table{glmrate::BonusMalusTable::from_json(std::string_view(text, length))}; });
}

glmr_status glmr_bm_table_load_file(const char* path, glmr_bm_table** out) {
  GLMR_REQUIRE(path && out, "path and out must not be null");
  *out = nullptr;
  return guarded([&] {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw glmrate::Error(glmrate::ErrorCode::io, std::string("cannot open '") + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    *out = new glmr_bm_table{glmrate::BonusMalusTable::from_json(buffer.str())};
  });
}

void glmr_bm_table_free(glmr_bm_table* table) { delete table; }

int glmr_bm_steps(const glmr_bm_table* table) { return table ? table->table.n_steps() : 0; }

glmr_status glmr_bm_next_step(const glmr_bm_table* table, int step, int claims, int* out) {
  GLMR_REQUIRE(table && out, "table and out must not be null");
  return guarded([&] { *out = table->table.next_step(step, claims); });
}

glmr_status glmr_bm_premium(const glmr_bm_table* table, int step, double base_premium, double* out) {
  GLMR_REQUIRE(table && out, "table and out must not be null");
  return guarded([&] { *out = table->table.premium(step, base_premium); });
}

glmr_status glmr_bm_stationary(const glmr_bm_table* table, double lambda, double* out, size_t capacity) {
  GLMR_REQUIRE(table && out, "table and out must not be null");
  if (capacity < static_cast<size_t>(table->table.n_steps()))
    return fail(GLMR_ERR_ARGUMENT, "output buffer too small");
  return guarded([&] {
    const auto pi = glmrate::stationary_distribution(table->table, lambda);
    std::copy(pi.begin(), pi.end(), out);
  });
}

glmr_status glmr_bm_simulate_report(const glmr_bm_table* table, int start_step, const int* claims, size_t years,
                                    double base_premium, glmr_format format, char** out) {
  GLMR_REQUIRE(table && out && (claims || years == 0), "table, claims and out must not be null");
  *out = nullptr;
  glmr_status status = GLMR_OK;
  const auto rc = guarded([&] {
    const std::vector<int> yearly(claims, claims + years);
    const auto trajectory = glmrate::simulate_trajectory(table->table, start_step, yearly, base_premium);
    status = emit(glmrate::trajectory_report(table->table, trajectory, base_premium), format, out);
  });
  return rc != GLMR_OK ? rc : status;
}

glmr_status glmr_bm_steady_report(const glmr_bm_table* table, double lambda, double base_premium,
                                  glmr_format format, char** out) {
  GLMR_REQUIRE(table && out, "table and out must not be null");
  *out = nullptr;
  glmr_status status = GLMR_OK;
  const auto rc = guarded([&] {
    if (!(base_premium > 0.0)) throw glmrate::Error(glmrate::ErrorCode::value, "base premium must be positive");
    const auto pi = glmrate::stationary_distribution(table->table, lambda);
    status = emit(glmrate::steady_state_report(table->table, lambda, pi, base_premium), format, out);
  });
  return rc != GLMR_OK ? rc : status;
}

}  // extern "C"
