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

// glmrate command-line front end. Reports go to stdout, diagnostics to
// stderr. Exit status: 0 success, 1 input/argument errors, 2 when a fit does
// not converge.

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "glmrate/glmrate.h"

namespace {

struct DatasetDeleter {
  void operator()(glmr_dataset* p) const { glmr_dataset_free(p); }
};
struct FitDeleter {
  void operator()(glmr_fit* p) const { glmr_fit_free(p); }
};
struct TableDeleter {
  void operator()(glmr_bm_table* p) const { glmr_bm_table_free(p); }
};
struct StringDeleter {
  void operator()(char* p) const { glmr_string_free(p); }
};

using DatasetPtr = std::unique_ptr<glmr_dataset, DatasetDeleter>;
using FitPtr = std::unique_ptr<glmr_fit, FitDeleter>;
using TablePtr = std::unique_ptr<glmr_bm_table, TableDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

// Thrown to unwind to main with an exit code after reporting.
struct Exit {
  int code;
};

void check(glmr_status status) {
  if (status == GLMR_OK) return;
  std::fprintf(stderr, "glmrate: %s: %s\n", glmr_status_name(status), glmr_last_error());
  throw Exit{status == GLMR_ERR_CONVERGENCE ? 2 : 1};
}

void print(StringPtr text) { std::fputs(text.get(), stdout); }

DatasetPtr load(const std::string& path) {
  glmr_dataset* raw = nullptr;
  check(glmr_dataset_load_file(path.c_str(), &raw));
  DatasetPtr ds(raw);
  if (glmr_dataset_exposure_defaulted(ds.get()))
    std::fprintf(stderr, "glmrate: warning: '%s' has no exposure column; using exposure = 1.0\n", path.c_str());
  return ds;
}

FitPtr fit(const glmr_dataset* ds, const std::string& formula, const std::string& family) {
  glmr_fit* raw = nullptr;
  check(glmr_fit_formula(ds, formula.c_str(), family.c_str(), &raw));
  return FitPtr(raw);
}

TablePtr bonus_malus_table(const std::string& path) {
  glmr_bm_table* raw = nullptr;
  check(path.empty() ? glmr_bm_table_standard(&raw) : glmr_bm_table_load_file(path.c_str(), &raw));
  return TablePtr(raw);
}

glmr_format stdout_format(bool json) { return json ? GLMR_FORMAT_JSON : GLMR_FORMAT_TEXT; }

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GLM claim-frequency fitting, tariffs and Bonus-Malus simulation"};
  app.require_subcommand(1);

  const std::string default_data = GLMRATE_DEFAULT_DATA;

  // fit
  std::string fit_data = default_data, fit_formula, fit_family = "poisson";
  bool fit_json = false;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a GLM and print its coefficient table");
  fit_cmd->add_option("--data", fit_data, "Portfolio CSV")->capture_default_str();
  fit_cmd->add_option("--formula", fit_formula, "Model formula, e.g. 'claims ~ region + type'")->required();
  fit_cmd->add_option("--family", fit_family, "poisson or normal")->capture_default_str();
  fit_cmd->add_flag("--json", fit_json, "Emit JSON");

  // compare
  std::string cmp_data = default_data, cmp_reduced, cmp_full;
  double cmp_alpha = 0.05;
  bool cmp_json = false;
  auto* cmp_cmd = app.add_subcommand("compare", "Change-in-scaled-deviance test of two nested models");
  cmp_cmd->add_option("--data", cmp_data, "Portfolio CSV")->capture_default_str();
  cmp_cmd->add_option("--reduced", cmp_reduced, "Formula of the smaller model")->required();
  cmp_cmd->add_option("--full", cmp_full, "Formula of the larger model")->required();
  cmp_cmd->add_option("--alpha", cmp_alpha, "Significance level")->capture_default_str();
  cmp_cmd->add_flag("--json", cmp_json, "Emit JSON");

  // tariff
  std::string tar_data = default_data, tar_formula, tar_output, tar_format;
  bool tar_json = false;
  auto* tar_cmd = app.add_subcommand("tariff", "Write the rate, years-to-one-claim and relativity of every cell");
  tar_cmd->add_option("--data", tar_data, "Portfolio CSV")->capture_default_str();
  tar_cmd->add_option("--formula", tar_formula, "Model formula")->required();
  tar_cmd->add_option("--output,-o", tar_output, "Tariff file to write")->required();
  tar_cmd->add_option("--format", tar_format, "csv or json (default: from the file extension)");
  tar_cmd->add_flag("--json", tar_json, "Emit the stdout summary as JSON");

  // bm
  auto* bm_cmd = app.add_subcommand("bm", "Bonus-Malus system");
  bm_cmd->require_subcommand(1);
  std::string bm_table_path;
  bm_cmd->add_option("--table", bm_table_path, "JSON file overriding the built-in 14-step table");

  int sim_start = 2;
  std::vector<int> sim_claims;
  double sim_base = 100.0;
  bool sim_json = false;
  auto* sim_cmd = bm_cmd->add_subcommand("simulate", "Year-by-year premiums for a claim history");
  sim_cmd->add_option("--start", sim_start, "Starting step")->capture_default_str();
  sim_cmd->add_option("--claims", sim_claims, "Claims per year, comma separated")->delimiter(',');
  sim_cmd->add_option("--base", sim_base, "Base premium")->capture_default_str();
  sim_cmd->add_flag("--json", sim_json, "Emit JSON");

  double st_lambda = 0.0;
  double st_base = 100.0;
  bool st_json = false;
  auto* st_cmd = bm_cmd->add_subcommand("steady", "Long-run step distribution under Poisson claims");
  st_cmd->add_option("--lambda", st_lambda, "Mean claims per year")->required();
  st_cmd->add_option("--base", st_base, "Base premium")->capture_default_str();
  st_cmd->add_flag("--json", st_json, "Emit JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*fit_cmd) {
      auto ds = load(fit_data);
      auto f = fit(ds.get(), fit_formula, fit_family);
      char* out = nullptr;
      check(glmr_fit_report(f.get(), stdout_format(fit_json), &out));
      print(StringPtr(out));
    } else if (*cmp_cmd) {
      auto ds = load(cmp_data);
      auto reduced = fit(ds.get(), cmp_reduced, "poisson");
      auto full = fit(ds.get(), cmp_full, "poisson");
      char* out = nullptr;
      check(glmr_compare_report(reduced.get(), full.get(), cmp_alpha, stdout_format(cmp_json), &out));
      print(StringPtr(out));
    } else if (*tar_cmd) {
      glmr_format file_format = GLMR_FORMAT_CSV;
      if (tar_format == "json" || (tar_format.empty() && ends_with(tar_output, ".json"))) {
        file_format = GLMR_FORMAT_JSON;
      } else if (!tar_format.empty() && tar_format != "csv") {
        std::fprintf(stderr, "glmrate: unknown tariff format '%s' (expected csv or json)\n", tar_format.c_str());
        return 1;
      }
      auto ds = load(tar_data);
      auto f = fit(ds.get(), tar_formula, "poisson");
      check(glmr_tariff_write(f.get(), tar_output.c_str(), file_format));
      char* out = nullptr;
      check(glmr_tariff_render(f.get(), tar_json ? GLMR_FORMAT_JSON : GLMR_FORMAT_TEXT, &out));
      print(StringPtr(out));
    } else if (*sim_cmd) {
      auto table = bonus_malus_table(bm_table_path);
      char* out = nullptr;
      check(glmr_bm_simulate_report(table.get(), sim_start, sim_claims.data(), sim_claims.size(), sim_base,
                                    stdout_format(sim_json), &out));
      print(StringPtr(out));
    } else if (*st_cmd) {
      auto table = bonus_malus_table(bm_table_path);
      char* out = nullptr;
      check(glmr_bm_steady_report(table.get(), st_lambda, st_base, stdout_format(st_json), &out));
      print(StringPtr(out));
    }
  } catch (const Exit& e) {
    return e.code;
  }
  return std::fflush(stdout) == 0 ? 0 : 1;
}
