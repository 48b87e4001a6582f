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

// Strict YAML reading helpers shared by the plan, topology, scenario and
// variant-config parsers. Not part of the public headers.

#include <yaml-cpp/yaml.h>

#include <cstdint>
#include <set>
#include <string>

#include "oxlab/errors.h"
#include "oxlab/params.h"

namespace oxlab::yaml {

YAML::Node Parse(const std::string& text, const std::string& what);

std::string Join(const std::string& path, const std::string& key);
std::string Index(const std::string& path, size_t i);

[[noreturn]] void Fail(const std::string& code, const std::string& path,
                       const std::string& message, const YAML::Node& at);

template <class T>
T As(const YAML::Node& node, const std::string& path);

template <>
std::string As<std::string>(const YAML::Node& node, const std::string& path);
template <>
double As<double>(const YAML::Node& node, const std::string& path);
template <>
int64_t As<int64_t>(const YAML::Node& node, const std::string& path);
template <>
uint64_t As<uint64_t>(const YAML::Node& node, const std::string& path);
template <>
bool As<bool>(const YAML::Node& node, const std::string& path);

void ExpectMap(const YAML::Node& node, const std::string& path);
void ExpectSeq(const YAML::Node& node, const std::string& path);

ParamValue AsParam(const YAML::Node& node, const std::string& path);
ParamMap AsParamMap(const YAML::Node& node, const std::string& path);

// Reads keys of one mapping and rejects any key that was never asked for.
class MapReader {
 public:
  MapReader(const YAML::Node& node, std::string path);

  bool Has(const std::string& key) const;
  YAML::Node Required(const std::string& key);
  // Null node when absent.
  YAML::Node Optional(const std::string& key);

  template <class T>
  T Get(const std::string& key) {
    return As<T>(Required(key), Path(key));
  }
  template <class T>
  T GetOr(const std::string& key, T fallback) {
    YAML::Node n = Optional(key);
    return n ? As<T>(n, Path(key)) : fallback;
  }

  std::string Path(const std::string& key) const { return Join(path_, key); }
  const std::string& path() const { return path_; }
  const YAML::Node& node() const { return node_; }

  // Throws ConfigError("UnknownField") for the first unconsumed key.
  void Finish() const;

 private:
  YAML::Node node_;
  std::string path_;
  std::set<std::string> seen_;
};

// Shortest round-trip rendering of a double ("0.1", "2", "1e-06").
std::string FormatDouble(double v);

void EmitParam(YAML::Emitter& out, const ParamValue& value);

}  // namespace oxlab::yaml
