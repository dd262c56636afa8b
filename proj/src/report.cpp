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

#include "glmrate/report.hpp"

#include <algorithm>

#include <fmt/format.h>
#include <json.hpp>

namespace glmrate {

ReportValue ReportValue::text(std::string s) {
  ReportValue v;
  v.display = s;
  v.data = std::move(s);
  return v;
}

ReportValue ReportValue::integer(std::int64_t n) { return {n, fmt::format("{}", n)}; }

ReportValue ReportValue::flag(bool b) { return {b, b ? "yes" : "no"}; }

ReportValue ReportValue::fixed(double x, int decimals) { return {x, fmt::format("{:.{}f}", x, decimals)}; }

ReportValue ReportValue::estimate(double x) { return fixed(x, 5); }

ReportValue ReportValue::p_value(double p) {
  if (p < 2e-16) return {p, "< 2e-16"};
  return {p, fmt::format("{:.4g}", p)};
}

namespace {

using json = nlohmann::ordered_json;

json to_json(const ReportValue& v) {
  return std::visit([](const auto& x) { return json(x); }, v.data);
}

std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

void render_table(std::string& out, const ReportTable& t) {
  std::vector<std::size_t> width(t.columns.size(), 0);
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    width[c] = t.columns[c].header.size();
    for (const auto& row : t.rows) width[c] = std::max(width[c], row[c].display.size());
  }
  auto line = [&](auto cell_text) {
    std::string l;
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      if (c > 0) l += "  ";
      l += c == 0 ? pad_right(cell_text(c), width[c]) : pad_left(cell_text(c), width[c]);
    }
    while (!l.empty() && l.back() == ' ') l.pop_back();
    out += l + "\n";
  };
  line([&](std::size_t c) { return t.columns[c].header; });
  for (const auto& row : t.rows) line([&](std::size_t c) { return row[c].display; });
}

void render_fields(std::string& out, const ReportFields& fields) {
  std::size_t width = 0;
  for (const auto& f : fields) width = std::max(width, f.label.size());
  for (const auto& f : fields) out += pad_right(f.label + ":", width + 1) + " " + f.value.display + "\n";
}

std::string decision_text(Decision d) { return d == Decision::reject ? "reject" : "fail-to-reject"; }

}  // namespace

std::string render_plain(const ReportDocument& doc) {
  std::string out = doc.title + "\n";
  for (const auto& s : doc.sections) {
    out += "\n" + s.title + "\n" + std::string(s.title.size(), '-') + "\n";
    if (const auto* t = std::get_if<ReportTable>(&s.body))
      render_table(out, *t);
    else if (const auto* f = std::get_if<ReportFields>(&s.body))
      render_fields(out, *f);
    else
      out += std::get<std::string>(s.body) + "\n";
  }
  return out;
}

std::string render_json(const ReportDocument& doc) {
  json root;
  root["kind"] = doc.kind;
  root["title"] = doc.title;
  json sections = json::object();
  for (const auto& s : doc.sections) {
    json section;
    section["title"] = s.title;
    if (const auto* t = std::get_if<ReportTable>(&s.body)) {
      json columns = json::array();
      for (const auto& c : t->columns) columns.push_back({{"key", c.key}, {"header", c.header}});
      json rows = json::array();
      for (const auto& row : t->rows) {
        json r = json::object();
        for (std::size_t c = 0; c < t->columns.size(); ++c) r[t->columns[c].key] = to_json(row[c]);
        rows.push_back(std::move(r));
      }
      section["columns"] = std::move(columns);
      section["rows"] = std::move(rows);
    } else if (const auto* f = std::get_if<ReportFields>(&s.body)) {
      json fields = json::object();
      for (const auto& field : *f) fields[field.key] = to_json(field.value);
      section["fields"] = std::move(fields);
    } else {
      section["text"] = std::get<std::string>(s.body);
    }
    sections[s.key] = std::move(section);
  }
  root["sections"] = std::move(sections);
  return root.dump(2) + "\n";
}

ReportDocument fit_report(const FitResult& fit, const std::string& formula_text, double alpha) {
  ReportDocument doc;
  doc.kind = "fit";
  doc.title = fmt::format("GLM fit: {}", formula_text);

  doc.sections.push_back({"model", "Model",
                          ReportFields{
                              {"formula", "Formula", ReportValue::text(formula_text)},
                              {"family", "Family", ReportValue::text(std::string(fit.family.name()))},
                              {"link", "Link", ReportValue::text(std::string(fit.family.link_name()))},
                              {"observations", "Observations",
                               ReportValue::integer(static_cast<std::int64_t>(fit.n_observations()))},
                              {"parameters", "Parameters",
                               ReportValue::integer(static_cast<std::int64_t>(fit.n_parameters()))},
                          }});

  ReportTable coef{{{"term", ""},
                    {"estimate", "Estimate"},
                    {"std_error", "Std. Error"},
                    {"z_value", "z value"},
                    {"p_value", "Pr(>|z|)"}},
                   {}};
  for (std::size_t j = 0; j < fit.n_parameters(); ++j) {
    const auto i = static_cast<Eigen::Index>(j);
    coef.rows.push_back({ReportValue::text(fit.labels[j]), ReportValue::estimate(fit.coefficients[i]),
                         ReportValue::estimate(fit.std_errors[i]), ReportValue::fixed(fit.z_values[i], 3),
                         ReportValue::p_value(fit.p_values[i])});
  }
  doc.sections.push_back({"coefficients", "Coefficients", std::move(coef)});

  doc.sections.push_back(
      {"deviance", "Deviance",
       ReportFields{
           {"null_deviance", "Null deviance", ReportValue::fixed(fit.null_deviance, 3)},
           {"df_null", "Null df", ReportValue::integer(fit.df_null)},
           {"deviance", "Residual deviance", ReportValue::fixed(fit.deviance, 3)},
           {"scaled_deviance", "Scaled deviance", ReportValue::fixed(fit.scaled_deviance, 3)},
           {"df_residual", "Residual df", ReportValue::integer(fit.df_residual)},
           {"log_likelihood", "Log-likelihood", ReportValue::fixed(fit.log_likelihood, 3)},
           {"aic", "AIC", ReportValue::fixed(fit.aic, 2)},
           {"iterations", "IRLS iterations", ReportValue::integer(fit.n_iterations)},
           {"converged", "Converged", ReportValue::flag(fit.converged)},
       }});

  if (fit.df_residual > 0) {
    const auto gof = goodness_of_fit(fit, alpha);
    doc.sections.push_back({"goodness_of_fit", "Residual deviance test",
                            ReportFields{
                                {"hypothesis", "H0", ReportValue::text(gof.narrative)},
                                {"statistic", "Scaled deviance", ReportValue::fixed(gof.statistic, 3)},
                                {"df", "df", ReportValue::integer(gof.df)},
                                {"p_value", "P(chi2 > D*)", ReportValue::fixed(gof.p_value, 7)},
                                {"alpha", "Alpha", ReportValue::fixed(gof.alpha, 3)},
                                {"decision", "Decision", ReportValue::text(decision_text(gof.decision))},
                            }});
  }
  return doc;
}

ReportDocument compare_report(const FitResult& reduced, const std::string& reduced_formula, const FitResult& full,
                              const std::string& full_formula, const TestReport& test) {
  ReportDocument doc;
  doc.kind = "compare";
  doc.title = "Change in scaled deviance";

  ReportTable models{{{"role", "Model"},
                      {"formula", "Formula"},
                      {"parameters", "Parameters"},
                      {"scaled_deviance", "Scaled deviance"},
                      {"df_residual", "Residual df"},
                      {"aic", "AIC"}},
                     {}};
  auto add = [&](const char* role, const FitResult& f, const std::string& formula) {
    models.rows.push_back({ReportValue::text(role), ReportValue::text(formula),
                           ReportValue::integer(static_cast<std::int64_t>(f.n_parameters())),
                           ReportValue::fixed(f.scaled_deviance, 3), ReportValue::integer(f.df_residual),
                           ReportValue::fixed(f.aic, 2)});
  };
  add("reduced", reduced, reduced_formula);
  add("full", full, full_formula);
  doc.sections.push_back({"models", "Models", std::move(models)});

  const bool keep_reduced = test.decision == Decision::fail_to_reject;
  doc.sections.push_back(
      {"test", "Test",
       ReportFields{
           {"hypothesis", "H0", ReportValue::text(test.narrative)},
           {"statistic", "D*_reduced - D*_full", ReportValue::fixed(test.statistic, 3)},
           {"q", "q", ReportValue::integer(test.df)},
           {"alpha", "Alpha", ReportValue::fixed(test.alpha, 3)},
           {"critical_value", "Critical value", ReportValue::fixed(test.critical_value, 5)},
           {"p_value", "p-value", ReportValue::p_value(test.p_value)},
           {"decision", "Decision", ReportValue::text(decision_text(test.decision))},
           {"verdict", "Verdict",
            ReportValue::text(keep_reduced ? "keep the reduced model (extra terms not justified)"
                                           : "reject the reduced model (extra terms are significant)")},
       }});
  return doc;
}

ReportDocument tariff_report(const TariffTable& table) {
  ReportDocument doc;
  doc.kind = "tariff";
  doc.title = "Tariff (expected claims per unit exposure)";
  ReportTable t;
  for (const auto& d : table.dimensions) t.columns.push_back({d.name, d.name});
  t.columns.push_back({"annual_rate", "Rate"});
  t.columns.push_back({"years_to_one_claim", "Years to one claim"});
  t.columns.push_back({"relativity", "Relativity"});
  for (const auto& c : table.cells) {
    std::vector<ReportValue> row;
    for (const auto& l : c.levels) row.push_back(ReportValue::text(l));
    row.push_back(ReportValue::fixed(c.annual_rate, 7));
    row.push_back(ReportValue::fixed(c.years_to_one_claim, 3));
    row.push_back(ReportValue::fixed(c.relativity, 5));
    t.rows.push_back(std::move(row));
  }
  doc.sections.push_back({"cells", "Cells", std::move(t)});
  return doc;
}

ReportDocument trajectory_report(const BonusMalusTable& table, const std::vector<TrajectoryYear>& years,
                                 double base_premium) {
  ReportDocument doc;
  doc.kind = "bm-simulate";
  doc.title = "Bonus-Malus trajectory";
  doc.sections.push_back({"settings", "Settings",
                          ReportFields{
                              {"base_premium", "Base premium", ReportValue::fixed(base_premium, 2)},
                              {"steps", "Steps", ReportValue::integer(table.n_steps())},
                          }});
  ReportTable t{{{"year", "Year"},
                 {"step", "Step"},
                 {"percentage", "Percentage"},
                 {"premium", "Premium"},
                 {"claims", "Claims"},
                 {"step_after", "Next step"}},
                {}};
  double total = 0.0;
  for (const auto& y : years) {
    t.rows.push_back({ReportValue::integer(y.year), ReportValue::integer(y.step_entering),
                      ReportValue::fixed(table.percentage(y.step_entering), 1), ReportValue::fixed(y.premium, 2),
                      ReportValue::integer(y.claims), ReportValue::integer(y.step_after)});
    total += y.premium;
  }
  doc.sections.push_back({"years", "Years", std::move(t)});
  doc.sections.push_back({"summary", "Summary",
                          ReportFields{
                              {"years", "Years simulated", ReportValue::integer(static_cast<std::int64_t>(years.size()))},
                              {"final_step", "Final step",
                               ReportValue::integer(years.empty() ? 0 : years.back().step_after)},
                              {"total_premium", "Total premium", ReportValue::fixed(total, 2)},
                          }});
  return doc;
}

ReportDocument steady_state_report(const BonusMalusTable& table, double lambda,
                                   const std::vector<double>& distribution, double base_premium) {
  ReportDocument doc;
  doc.kind = "bm-steady";
  doc.title = "Bonus-Malus stationary distribution";
  ReportTable t{{{"step", "Step"}, {"percentage", "Percentage"}, {"probability", "Probability"}}, {}};
  for (int s = 1; s <= table.n_steps(); ++s)
    t.rows.push_back({ReportValue::integer(s), ReportValue::fixed(table.percentage(s), 1),
                      ReportValue::fixed(distribution[static_cast<std::size_t>(s - 1)], 6)});
  doc.sections.push_back({"distribution", "Distribution", std::move(t)});
  doc.sections.push_back(
      {"summary", "Summary",
       ReportFields{
           {"lambda", "Claim frequency", ReportValue::fixed(lambda, 4)},
           {"base_premium", "Base premium", ReportValue::fixed(base_premium, 2)},
           {"expected_premium", "Expected premium",
            ReportValue::fixed(expected_premium(table, distribution, base_premium), 2)},
       }});
  return doc;
}

}  // namespace glmrate
