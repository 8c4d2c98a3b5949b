// Copyright 2026 The qgm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace qgm {

/// Process exit codes shared by the experiment runner and the CLI.
enum class ErrorCode : int {
  kOk = 0,
  kUsage = 1,              // bad flags or flag values
  kNoRows = 2,             // plot input has no data rows
  kUnknownExperiment = 3,
  kOutputUnwritable = 4,
  kInvalidConfig = 5,      // missing keys or violated config invariants
  kInputError = 6,         // unreadable or malformed input file
  kResourceLimit = 7,      // exact propagation exceeded its term limit
};

class QgmError : public std::runtime_error {
 public:
  QgmError(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }
  int exit_code() const { return static_cast<int>(code_); }

 private:
  ErrorCode code_;
};

}  // namespace qgm
