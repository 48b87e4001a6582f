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

#include "yaml_util.h"

#include <fmt/format.h>

#include <cerrno>
#include <cmath>
#include <cstdlib>

namespace oxlab {

ConfigError::ConfigError(std::string code, std::string path, const std::string& message,
                         int line, int column)
    : std::runtime_error(
          line > 0 ? fmt::format("{} at {} (line {}, column {}): {}", code,
                                 path.empty() ? "<root>" : path, line, column, message)
                   : fmt::format("{} at {}: {}", code, path.empty() ? "<root>" : path,
                                 message)),
      code_(std::move(code)),
      path_(std::move(path)),
      line_(line),
      column_(column) {}

std::string FormatViolations(const std::vector<Violation>& violations) {
  std::string out;
  for (const auto& v : violations) {
    out += fmt::format("  [{}] {}: {}\n", v.code, v.path.empty() ? "<root>" : v.path,
                       v.message);
  }
  return out;
}

std::string_view ParamTypeName(ParamType type) {
  switch (type) {
    case ParamType::kNumber:
      return "number";
    case ParamType::kInteger:
      return "integer";
    case ParamType::kBool:
      return "bool";
    case ParamType::kString:
      return "string";
  }
  return "?";
}

std::string ParamValueToString(const ParamValue& value) {
  if (const auto* b = std::get_if<bool>(&value)) return *b ? "true" : "false";
  if (const auto* d = std::get_if<double>(&value)) return yaml::FormatDouble(*d);
  return std::get<std::string>(value);
}

bool ParamMatchesType(const ParamValue& value, ParamType type) {
  switch (type) {
    case ParamType::kNumber:
      return std::holds_alternative<double>(value);
    case ParamType::kInteger: {
      const auto* d = std::get_if<double>(&value);
      return d != nullptr && std::isfinite(*d) && std::floor(*d) == *d;
    }
    case ParamType::kBool:
      return std::holds_alternative<bool>(value);
    case ParamType::kString:
      return std::holds_alternative<std::string>(value);
  }
  return false;
}

std::optional<double> GetNumber(const ParamMap& params, const std::string& name) {
  auto it = params.find(name);
  if (it == params.end()) return std::nullopt;
  if (const auto* d = std::get_if<double>(&it->second)) return *d;
  return std::nullopt;
}

std::optional<bool> GetBool(const ParamMap& params, const std::string& name) {
  auto it = params.find(name);
  if (it == params.end()) return std::nullopt;
  if (const auto* b = std::get_if<bool>(&it->second)) return *b;
  return std::nullopt;
}

std::optional<std::string> GetString(const ParamMap& params, const std::string& name) {
  auto it = params.find(name);
  if (it == params.end()) return std::nullopt;
  if (const auto* s = std::get_if<std::string>(&it->second)) return *s;
  return std::nullopt;
}

double NumberOr(const ParamMap& params, const std::string& name, double fallback) {
  return GetNumber(params, name).value_or(fallback);
}

namespace yaml {

namespace {

int LineOf(const YAML::Node& n) {
  if (!n.IsDefined()) return -1;
  auto m = n.Mark();
  return m.is_null() ? -1 : m.line + 1;
}
int ColumnOf(const YAML::Node& n) {
  if (!n.IsDefined()) return -1;
  auto m = n.Mark();
  return m.is_null() ? -1 : m.column + 1;
}

const std::string& Scalar(const YAML::Node& node, const std::string& path,
                          std::string_view expected) {
  if (!node.IsScalar()) {
    Fail("TypeMismatch", path, fmt::format("expected {}", expected), node);
  }
  return node.Scalar();
}

std::optional<double> ParseDouble(const std::string& s) {
  if (s.empty()) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE) return std::nullopt;
  return v;
}

std::optional<int64_t> ParseInt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  long long v = std::strtoll(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size() || errno == ERANGE) return std::nullopt;
  return v;
}

}  // namespace

YAML::Node Parse(const std::string& text, const std::string& what) {
  try {
    return YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("Syntax", what, e.msg, e.mark.line + 1, e.mark.column + 1);
  }
}

std::string Join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string Index(const std::string& path, size_t i) {
  return fmt::format("{}[{}]", path, i);
}

void Fail(const std::string& code, const std::string& path, const std::string& message,
          const YAML::Node& at) {
  throw ConfigError(code, path, message, LineOf(at), ColumnOf(at));
}

template <>
std::string As<std::string>(const YAML::Node& node, const std::string& path) {
  return Scalar(node, path, "string");
}

template <>
double As<double>(const YAML::Node& node, const std::string& path) {
  auto v = ParseDouble(Scalar(node, path, "number"));
  if (!v || node.Tag() == "!") Fail("TypeMismatch", path, "expected number", node);
  return *v;
}

template <>
int64_t As<int64_t>(const YAML::Node& node, const std::string& path) {
  auto v = ParseInt(Scalar(node, path, "integer"));
  if (!v || node.Tag() == "!") Fail("TypeMismatch", path, "expected integer", node);
  return *v;
}

template <>
uint64_t As<uint64_t>(const YAML::Node& node, const std::string& path) {
  const std::string& s = Scalar(node, path, "unsigned integer");
  if (s.empty() || s[0] == '-' || node.Tag() == "!") {
    Fail("TypeMismatch", path, "expected unsigned integer", node);
  }
  errno = 0;
  char* end = nullptr;
  unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size() || errno == ERANGE) {
    Fail("TypeMismatch", path, "expected unsigned integer", node);
  }
  return v;
}

template <>
bool As<bool>(const YAML::Node& node, const std::string& path) {
  const std::string& s = Scalar(node, path, "bool");
  if (node.Tag() != "!") {
    if (s == "true") return true;
    if (s == "false") return false;
  }
  Fail("TypeMismatch", path, "expected bool (true/false)", node);
}

void ExpectMap(const YAML::Node& node, const std::string& path) {
  if (!node.IsMap()) Fail("TypeMismatch", path, "expected mapping", node);
}

void ExpectSeq(const YAML::Node& node, const std::string& path) {
  if (!node.IsSequence()) Fail("TypeMismatch", path, "expected sequence", node);
}

ParamValue AsParam(const YAML::Node& node, const std::string& path) {
  const std::string& s = Scalar(node, path, "scalar parameter value");
  if (node.Tag() == "!") return s;  // quoted
  if (s == "true") return true;
  if (s == "false") return false;
  if (auto d = ParseDouble(s)) return *d;
  return s;
}

ParamMap AsParamMap(const YAML::Node& node, const std::string& path) {
  ParamMap out;
  if (!node || node.IsNull()) return out;
  ExpectMap(node, path);
  for (const auto& kv : node) {
    std::string key = As<std::string>(kv.first, path);
    out[key] = AsParam(kv.second, Join(path, key));
  }
  return out;
}

MapReader::MapReader(const YAML::Node& node, std::string path)
    : node_(node), path_(std::move(path)) {
  ExpectMap(node_, path_);
}

bool MapReader::Has(const std::string& key) const {
  return static_cast<bool>(node_[key]);
}

YAML::Node MapReader::Required(const std::string& key) {
  seen_.insert(key);
  YAML::Node n = node_[key];
  if (!n) Fail("MissingField", Path(key), "required field is missing", node_);
  return n;
}

YAML::Node MapReader::Optional(const std::string& key) {
  seen_.insert(key);
  YAML::Node n = node_[key];
  if (n && n.IsNull()) return YAML::Node();
  return n;
}

void MapReader::Finish() const {
  for (const auto& kv : node_) {
    std::string key = kv.first.IsScalar() ? kv.first.Scalar() : "<non-scalar key>";
    if (!seen_.contains(key)) {
      Fail("UnknownField", Join(path_, key), "unknown field '" + key + "'", kv.first);
    }
  }
}

std::string FormatDouble(double v) { return fmt::format("{}", v); }

void EmitParam(YAML::Emitter& out, const ParamValue& value) {
  if (const auto* b = std::get_if<bool>(&value)) {
    out << (*b ? "true" : "false");
  } else if (const auto* d = std::get_if<double>(&value)) {
    out << FormatDouble(*d);
  } else {
    out << YAML::DoubleQuoted << std::get<std::string>(value);
  }
}

}  // namespace yaml
}  // namespace oxlab
