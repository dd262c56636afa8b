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

#include "glmrate/portfolio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "glmrate/error.hpp"

namespace glmrate {

std::optional<std::size_t> Factor::level_index(std::string_view level) const {
  for (std::size_t i = 0; i < levels.size(); ++i)
    if (levels[i] == level) return i;
  return std::nullopt;
}

const Factor* FactorSchema::find(std::string_view name) const {
  for (const auto& f : factors)
    if (f.name == name) return &f;
  return nullptr;
}

PortfolioDataset::PortfolioDataset(FactorSchema schema, std::vector<Observation> rows,
                                   bool exposure_defaulted)
    : schema_(std::move(schema)), rows_(std::move(rows)), exposure_defaulted_(exposure_defaulted) {
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const auto& obs = rows_[r];
    if (obs.levels.size() != schema_.factors.size())
      throw Error(ErrorCode::schema, fmt::format("row {}: expected {} factor levels, got {}", r + 1,
                                                 schema_.factors.size(), obs.levels.size()));
    for (std::size_t k = 0; k < obs.levels.size(); ++k)
      if (obs.levels[k] >= schema_.factors[k].levels.size())
        throw Error(ErrorCode::schema, fmt::format("row {}: level index out of range for factor '{}'",
                                                   r + 1, schema_.factors[k].name));
    if (!(obs.claims >= 0.0) || obs.claims != std::floor(obs.claims))
      throw Error(ErrorCode::value, fmt::format("row {}: claims must be a nonnegative integer", r + 1));
    if (!(obs.exposure > 0.0) || !std::isfinite(obs.exposure))
      throw Error(ErrorCode::value, fmt::format("row {}: exposure must be positive", r + 1));
  }
}

double PortfolioDataset::total_claims() const {
  double total = 0.0;
  for (const auto& r : rows_) total += r.claims;
  return total;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Splits one CSV record. Quoted fields may contain commas and doubled quotes
// but not newlines.
std::vector<std::string> split_record(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current += c;
      }
    } else if (c == '"') {
      if (!trim(current).empty())
        throw ParseError(fmt::format("line {}, field {}: unexpected quote", line_no, fields.size() + 1),
                         line_no, fields.size() + 1);
      current.clear();
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.emplace_back(was_quoted ? current : std::string(trim(current)));
      current.clear();
      was_quoted = false;
    } else {
      current += c;
    }
  }
  if (quoted)
    throw ParseError(fmt::format("line {}: unterminated quoted field", line_no), line_no, fields.size() + 1);
  fields.emplace_back(was_quoted ? current : std::string(trim(current)));
  return fields;
}

struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> records;
  std::vector<std::size_t> line_numbers;
};

RawTable read_table(std::istream& in) {
  RawTable table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (trim(line).empty()) continue;
    auto fields = split_record(line, line_no);
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size())
      throw ParseError(fmt::format("line {}: expected {} fields, found {}", line_no, table.header.size(),
                                   fields.size()),
                       line_no, std::min(fields.size(), table.header.size()) + 1);
    table.records.push_back(std::move(fields));
    table.line_numbers.push_back(line_no);
  }
  if (!have_header) throw ParseError("input has no header row", 1, 1);
  return table;
}

std::optional<std::size_t> column_index(const std::vector<std::string>& header, std::string_view name) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  return std::nullopt;
}

std::optional<double> parse_number(std::string_view s) {
  double value = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end || s.empty()) return std::nullopt;
  return value;
}

PortfolioDataset build_dataset(const RawTable& table, const FactorSchema& schema) {
  const auto claims_col = column_index(table.header, kClaimsColumn);
  if (!claims_col) throw Error(ErrorCode::schema, "CSV header has no 'claims' column");
  const auto exposure_col = column_index(table.header, kExposureColumn);

  std::vector<std::size_t> factor_cols;
  for (const auto& f : schema.factors) {
    auto col = column_index(table.header, f.name);
    if (!col) throw Error(ErrorCode::schema, fmt::format("CSV header has no column for factor '{}'", f.name));
    factor_cols.push_back(*col);
  }

  std::vector<Observation> rows;
  rows.reserve(table.records.size());
  for (std::size_t r = 0; r < table.records.size(); ++r) {
    const auto& rec = table.records[r];
    const std::size_t line = table.line_numbers[r];
    Observation obs;
    for (std::size_t k = 0; k < schema.factors.size(); ++k) {
      const auto& factor = schema.factors[k];
      const auto& cell = rec[factor_cols[k]];
      auto idx = factor.level_index(cell);
      if (!idx)
        throw Error(ErrorCode::schema, fmt::format("line {}, column '{}': unknown level '{}'", line,
                                                   factor.name, cell));
      obs.levels.push_back(*idx);
    }

    const auto& claims_cell = rec[*claims_col];
    auto claims = parse_number(claims_cell);
    if (!claims || *claims != std::floor(*claims) || !std::isfinite(*claims))
      throw ParseError(fmt::format("line {}, column 'claims': '{}' is not an integer count", line, claims_cell),
                       line, *claims_col + 1);
    if (*claims < 0.0)
      throw Error(ErrorCode::value, fmt::format("line {}, column 'claims': negative count {}", line, claims_cell));
    obs.claims = *claims;

    if (exposure_col) {
      const auto& cell = rec[*exposure_col];
      auto exposure = parse_number(cell);
      if (!exposure || !std::isfinite(*exposure))
        throw ParseError(fmt::format("line {}, column 'exposure': '{}' is not a number", line, cell), line,
                         *exposure_col + 1);
      if (*exposure <= 0.0)
        throw Error(ErrorCode::value,
                    fmt::format("line {}, column 'exposure': exposure must be positive, got {}", line, cell));
      obs.exposure = *exposure;
    }
    rows.push_back(std::move(obs));
  }
  return PortfolioDataset(schema, std::move(rows), !exposure_col.has_value());
}

}  // namespace

PortfolioDataset load_portfolio(std::istream& in, const FactorSchema& schema) {
  return build_dataset(read_table(in), schema);
}

PortfolioDataset load_portfolio(std::string_view csv, const FactorSchema& schema) {
  std::istringstream in{std::string(csv)};
  return load_portfolio(in, schema);
}

FactorSchema infer_schema(std::string_view csv) {
  std::istringstream in{std::string(csv)};
  const RawTable table = read_table(in);
  FactorSchema schema;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    const auto& name = table.header[c];
    if (name == kClaimsColumn || name == kExposureColumn) continue;
    if (name.empty()) throw ParseError(fmt::format("header column {} is empty", c + 1), 1, c + 1);
    if (schema.find(name))
      throw Error(ErrorCode::schema, fmt::format("duplicate column '{}' in header", name));

    std::set<std::string> distinct;
    for (const auto& rec : table.records) distinct.insert(rec[c]);
    std::vector<std::string> levels(distinct.begin(), distinct.end());
    const bool numeric = std::all_of(levels.begin(), levels.end(),
                                     [](const std::string& l) { return parse_number(l).has_value(); });
    if (numeric)
      std::stable_sort(levels.begin(), levels.end(), [](const std::string& a, const std::string& b) {
        return *parse_number(a) < *parse_number(b);
      });
    schema.factors.push_back(Factor{name, std::move(levels)});
  }
  return schema;
}

PortfolioDataset load_portfolio_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, fmt::format("cannot open '{}'", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  return load_portfolio(text, infer_schema(text));
}

}  // namespace glmrate
