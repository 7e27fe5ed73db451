// Copyright 2026 The electree authors
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

#include <stdexcept>
#include <string>

namespace electree {

enum class ErrorCode {
  bad_syntax,
  self_loop,
  duplicate_edge,
  cycle,
  disconnected,
  negative_weight,
  bad_node,
  bad_parameter,
  scheme_error,
  size_bound,
  inconsistent_model,
  numeric_error,
  io_error,
};

inline const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::bad_syntax: return "bad_syntax";
    case ErrorCode::self_loop: return "self_loop";
    case ErrorCode::duplicate_edge: return "duplicate_edge";
    case ErrorCode::cycle: return "cycle";
    case ErrorCode::disconnected: return "disconnected";
    case ErrorCode::negative_weight: return "negative_weight";
    case ErrorCode::bad_node: return "bad_node";
    case ErrorCode::bad_parameter: return "bad_parameter";
    case ErrorCode::scheme_error: return "scheme_error";
    case ErrorCode::size_bound: return "size_bound";
    case ErrorCode::inconsistent_model: return "inconsistent_model";
    case ErrorCode::numeric_error: return "numeric_error";
    case ErrorCode::io_error: return "io_error";
  }
  return "unknown";
}

/// Library-wide exception; `code()` identifies the failure class so callers
/// (the CLI in particular) can map errors to exit codes without string
/// matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        message_(message) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace electree
