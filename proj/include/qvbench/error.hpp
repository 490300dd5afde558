// Copyright 2026 The qvbench authors
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

namespace qvb {

enum class ErrorCode {
  invalid_argument,  // bad dimensions, targets, parameters
  config,            // malformed run configuration
  parse,             // malformed or inconsistent serialized document
  resource_limit,    // statevector width over the configured cap
  fit,               // under-determined fit or estimation
  numeric,           // solver failure
  io,                // filesystem failure
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

  /// Process exit code used by the command-line tool.
  int exit_code() const {
    switch (code_) {
      case ErrorCode::config:
      case ErrorCode::parse:
      case ErrorCode::invalid_argument:
        return 2;
      case ErrorCode::resource_limit:
        return 3;
      case ErrorCode::fit:
        return 4;
      default:
        return 1;
    }
  }

 private:
  ErrorCode code_;
};

}  // namespace qvb
