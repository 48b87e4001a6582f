// Copyright 2026 The oxlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace oxlab {

// Raised for anything the operator must fix before an experiment can run:
// malformed YAML, unknown fields, type mismatches, unreadable files.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string code, std::string path, const std::string& message,
              int line = -1, int column = -1);

  const std::string& code() const { return code_; }
  const std::string& path() const { return path_; }
  // 1-based; -1 when the error has no source position.
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string code_;
  std::string path_;
  int line_;
  int column_;
};

// A validation finding. Violations are data: validators collect all of them
// instead of stopping at the first.
struct Violation {
  std::string code;
  std::string path;
  std::string message;

  bool operator==(const Violation&) const = default;
};

std::string FormatViolations(const std::vector<Violation>& violations);

}  // namespace oxlab
