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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace glmrate {

struct Term {
  enum class Kind { intercept, main_effect, interaction };

  Kind kind = Kind::intercept;
  /// Empty for the intercept, one name for a main effect, two for an
  /// interaction (in the order written).
  std::vector<std::string> factors;

  static Term intercept() { return Term{}; }
  static Term main_effect(std::string factor) { return Term{Kind::main_effect, {std::move(factor)}}; }
  static Term interaction(std::string a, std::string b) {
    return Term{Kind::interaction, {std::move(a), std::move(b)}};
  }

  /// Order-insensitive identity: "b:a" and "a:b" share a key.
  std::string key() const;
  /// Display form, e.g. "(Intercept)", "region", "region:type".
  std::string label() const;

  friend bool operator==(const Term&, const Term&) = default;
};

/// Parsed `response ~ term + term + ...`. The intercept is always present
/// and is the first term. Duplicate terms (including those produced by
/// expanding `a*b`) are kept once, at their first position.
struct ModelFormula {
  std::string response;
  std::vector<Term> terms;
  /// Column named inside `offset(log(<column>))`, if declared.
  std::optional<std::string> offset_log_column;

  std::string to_string() const;
};

/// Grammar:
///   formula := ident '~' term ('+' term)*
///   term    := '1' | ident | ident ':' ident | ident '*' ident
///            | 'offset' '(' 'log' '(' ident ')' ')'
/// Throws ParseError whose column() is the 0-based offset of the offending
/// token. Factor names are not checked here; see encode_design.
ModelFormula parse_formula(std::string_view text);

}  // namespace glmrate
