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

#include "glmrate/error.hpp"

namespace glmrate {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse: return "parse error";
    case ErrorCode::schema: return "schema error";
    case ErrorCode::value: return "value error";
    case ErrorCode::domain: return "domain error";
    case ErrorCode::rank: return "rank error";
    case ErrorCode::convergence: return "convergence error";
    case ErrorCode::nesting: return "nesting error";
    case ErrorCode::io: return "i/o error";
  }
  return "error";
}

}  // namespace glmrate
