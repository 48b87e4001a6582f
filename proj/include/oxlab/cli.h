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

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace oxlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

std::optional<std::string> SystemEnv(const std::string& name);

// `oxlab` entry point. `args` excludes the program name.
int Main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
         const EnvLookup& env = SystemEnv);

}  // namespace oxlab::cli
