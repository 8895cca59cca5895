// Copyright 2026 The FieldFuzz Authors.
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

#ifndef FIELDFUZZ_ERRORS_HPP_
#define FIELDFUZZ_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace fieldfuzz {

// Runtime failure caused by bad input data or configuration (bad corpus,
// bad spec file, unknown target). Maps to exit code 2 in the CLI.
class FuzzError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Layout spec file rejected; carries the 1-based line number when the
// problem is attributable to a single line (0 otherwise).
class SpecError : public FuzzError {
 public:
  SpecError(int line, const std::string& msg)
      : FuzzError(line > 0 ? "spec line " + std::to_string(line) + ": " + msg
                           : "spec: " + msg),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace fieldfuzz

#endif  // FIELDFUZZ_ERRORS_HPP_
