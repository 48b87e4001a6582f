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

#include <map>
#include <optional>
#include <string>
#include <variant>

namespace oxlab {

// Treatment and override parameter value. Numbers are always doubles; integer
// parameters are checked for integrality at validation time.
using ParamValue = std::variant<bool, double, std::string>;
using ParamMap = std::map<std::string, ParamValue>;

enum class ParamType { kNumber, kInteger, kBool, kString };

std::string_view ParamTypeName(ParamType type);
std::string ParamValueToString(const ParamValue& value);
bool ParamMatchesType(const ParamValue& value, ParamType type);

std::optional<double> GetNumber(const ParamMap& params, const std::string& name);
std::optional<bool> GetBool(const ParamMap& params, const std::string& name);
std::optional<std::string> GetString(const ParamMap& params, const std::string& name);

double NumberOr(const ParamMap& params, const std::string& name, double fallback);

}  // namespace oxlab
