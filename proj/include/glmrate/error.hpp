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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace glmrate {

enum class ErrorCode {
  parse,        // malformed CSV cell or formula text
  schema,       // unknown factor or level
  value,        // negative count, nonpositive exposure, bad argument value
  domain,       // mathematical domain violation
  rank,         // rank-deficient design (dummy trap)
  convergence,  // IRLS did not converge
  nesting,      // models are not strictly nested / fitted to different data
  io,           // file could not be read or written
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Syntax error with a location. For CSV input `line` is the 1-based file
/// line and `column` the 1-based field; for formulas `line` is 0 and
/// `column` is the 0-based character offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(ErrorCode::parse, message), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class RankError : public Error {
 public:
  RankError(const std::string& message, std::vector<std::string> dependent)
      : Error(ErrorCode::rank, message), dependent_(std::move(dependent)) {}

  /// Labels of the columns that lie in the span of earlier columns.
  const std::vector<std::string>& dependent_columns() const noexcept {
    return dependent_;
  }

 private:
  std::vector<std::string> dependent_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, std::vector<double> trace)
      : Error(ErrorCode::convergence, message), trace_(std::move(trace)) {}

  /// Deviance after each IRLS iteration, starting with the deviance at the
  /// initial means.
  const std::vector<double>& deviance_trace() const noexcept { return trace_; }

 private:
  std::vector<double> trace_;
};

}  // namespace glmrate
