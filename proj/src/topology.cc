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

#include "oxlab/topology.h"

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "yaml_util.h"

namespace oxlab {

double Distribution::SampleMs(Rng& rng) const {
  return std::visit(
      [&rng](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ConstantMs>) {
          return d.ms;
        } else if constexpr (std::is_same_v<T, UniformMs>) {
          return rng.Uniform(d.lo, d.hi);
        } else {
          return rng.LogNormal(d.mu, d.sigma);
        }
      },
      v_);
}

int64_t Distribution::SampleMicros(Rng& rng) const {
  return std::llround(SampleMs(rng) * 1000.0);
}

std::string Distribution::Check() const {
  return std::visit(
      [](const auto& d) -> std::string {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ConstantMs>) {
          if (!(d.ms >= 0) || !std::isfinite(d.ms)) return "constant latency must be >= 0";
        } else if constexpr (std::is_same_v<T, UniformMs>) {
          if (!(d.lo >= 0) || !std::isfinite(d.hi) || d.hi < d.lo) {
            return "uniform bounds must satisfy 0 <= lo <= hi";
          }
        } else {
          if (!std::isfinite(d.mu) || !(d.sigma >= 0) || !std::isfinite(d.sigma)) {
            return "lognormal needs finite mu and sigma >= 0";
          }
        }
        return {};
      },
      v_);
}

double Distribution::MeanMs() const {
  return std::visit(
      [](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ConstantMs>) {
          return d.ms;
        } else if constexpr (std::is_same_v<T, UniformMs>) {
          return 0.5 * (d.lo + d.hi);
        } else {
          return std::exp(d.mu + 0.5 * d.sigma * d.sigma);
        }
      },
      v_);
}

std::optional<size_t> Topology::IndexOf(std::string_view name) const {
  for (size_t i = 0; i < services.size(); ++i) {
    if (services[i].name == name) return i;
  }
  return std::nullopt;
}

const ServiceSpec* Topology::Find(std::string_view name) const {
  auto i = IndexOf(name);
  return i ? &services[*i] : nullptr;
}

bool Topology::HasEdge(std::string_view from, std::string_view to) const {
  const ServiceSpec* s = Find(from);
  if (s == nullptr) return false;
  for (const auto& c : s->calls) {
    if (c.callee == to) return true;
  }
  return false;
}

std::vector<Violation> ValidateTopology(const Topology& topology, const std::string& path) {
  std::vector<Violation> out;
  auto add = [&out](std::string p, std::string msg) {
    out.push_back({"InvalidTopology", std::move(p), std::move(msg)});
  };

  if (topology.services.empty()) add(path + ".services", "topology has no services");
  std::set<std::string> names;
  for (size_t i = 0; i < topology.services.size(); ++i) {
    const auto& s = topology.services[i];
    std::string sp = yaml::Index(path + ".services", i);
    if (s.name.empty()) add(sp + ".name", "service name is empty");
    if (!names.insert(s.name).second) add(sp + ".name", "duplicate service '" + s.name + "'");
    if (auto msg = s.latency.Check(); !msg.empty()) add(sp + ".latency_ms", msg);
    const CostParams& c = s.cpu;
    if (c.base_per_second < 0 || c.per_request < 0 || c.per_span_exported < 0 ||
        c.per_metric_sample < 0) {
      add(sp + ".cost", "cost parameters must be >= 0");
    }
    for (size_t j = 0; j < s.calls.size(); ++j) {
      const auto& call = s.calls[j];
      std::string cp = yaml::Index(sp + ".calls", j);
      if (!topology.Find(call.callee)) {
        add(cp + ".service", "unknown callee '" + call.callee + "'");
      }
      if (call.count < 0) add(cp + ".count", "calls per request must be >= 0");
      if (!call.sequential) add(cp + ".sequential", "only sequential calls are supported");
    }
  }
  if (!topology.entry.empty() && !topology.Find(topology.entry)) {
    add(path + ".entry", "entry service '" + topology.entry + "' does not exist");
  } else if (topology.entry.empty()) {
    add(path + ".entry", "entry service is not set");
  }

  // Cycle detection over the call graph.
  enum class Mark { kNew, kActive, kDone };
  std::vector<Mark> mark(topology.services.size(), Mark::kNew);
  bool cyclic = false;
  std::function<void(size_t)> visit = [&](size_t i) {
    mark[i] = Mark::kActive;
    for (const auto& call : topology.services[i].calls) {
      auto j = topology.IndexOf(call.callee);
      if (!j) continue;
      if (mark[*j] == Mark::kActive) cyclic = true;
      if (mark[*j] == Mark::kNew) visit(*j);
    }
    mark[i] = Mark::kDone;
  };
  for (size_t i = 0; i < topology.services.size() && !cyclic; ++i) {
    if (mark[i] == Mark::kNew) visit(i);
  }
  if (cyclic) add(path + ".services", "call graph contains a cycle");
  return out;
}

namespace yaml_io {

Distribution ReadDistribution(const YAML::Node& node, const std::string& path) {
  if (node.IsScalar()) return ConstantMs{yaml::As<double>(node, path)};
  yaml::ExpectMap(node, path);
  if (node.size() != 1) {
    yaml::Fail("TypeMismatch", path,
               "distribution must have exactly one of constant, uniform, lognormal", node);
  }
  auto kv = *node.begin();
  std::string kind = yaml::As<std::string>(kv.first, path);
  std::string sub = yaml::Join(path, kind);
  if (kind == "constant") return ConstantMs{yaml::As<double>(kv.second, sub)};
  if (kind == "uniform") {
    yaml::MapReader r(kv.second, sub);
    UniformMs u{r.Get<double>("lo"), r.Get<double>("hi")};
    r.Finish();
    return u;
  }
  if (kind == "lognormal") {
    yaml::MapReader r(kv.second, sub);
    LogNormalMs l{r.Get<double>("mu"), r.Get<double>("sigma")};
    r.Finish();
    return l;
  }
  yaml::Fail("UnknownField", sub, "unknown distribution '" + kind + "'", kv.first);
}

void EmitDistribution(YAML::Emitter& out, const Distribution& d) {
  std::visit(
      [&out](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ConstantMs>) {
          out << yaml::FormatDouble(v.ms);
        } else if constexpr (std::is_same_v<T, UniformMs>) {
          out << YAML::Flow << YAML::BeginMap << YAML::Key << "uniform" << YAML::Value
              << YAML::BeginMap << YAML::Key << "lo" << YAML::Value << yaml::FormatDouble(v.lo)
              << YAML::Key << "hi" << YAML::Value << yaml::FormatDouble(v.hi) << YAML::EndMap
              << YAML::EndMap;
        } else {
          out << YAML::Flow << YAML::BeginMap << YAML::Key << "lognormal" << YAML::Value
              << YAML::BeginMap << YAML::Key << "mu" << YAML::Value << yaml::FormatDouble(v.mu)
              << YAML::Key << "sigma" << YAML::Value << yaml::FormatDouble(v.sigma)
              << YAML::EndMap << YAML::EndMap;
        }
      },
      d.value());
}

namespace {

MicroCpu ReadCpu(yaml::MapReader& r, const std::string& key) {
  double v = r.GetOr<double>(key, 0.0);
  return ToMicroCpu(v);
}

ServiceSpec ReadService(const YAML::Node& node, const std::string& path) {
  yaml::MapReader r(node, path);
  ServiceSpec s;
  s.name = r.Get<std::string>("name");
  s.latency = ReadDistribution(r.Required("latency_ms"), r.Path("latency_ms"));
  if (YAML::Node calls = r.Optional("calls")) {
    yaml::ExpectSeq(calls, r.Path("calls"));
    for (size_t i = 0; i < calls.size(); ++i) {
      yaml::MapReader c(calls[i], yaml::Index(r.Path("calls"), i));
      CallSpec call;
      call.callee = c.Get<std::string>("service");
      call.count = c.GetOr<int64_t>("count", 1);
      call.sequential = c.GetOr<bool>("sequential", true);
      c.Finish();
      s.calls.push_back(std::move(call));
    }
  }
  if (YAML::Node cost = r.Optional("cost")) {
    yaml::MapReader c(cost, r.Path("cost"));
    s.cpu.base_per_second = ReadCpu(c, "base_per_second");
    s.cpu.per_request = ReadCpu(c, "per_request");
    s.cpu.per_span_exported = ReadCpu(c, "per_span_exported");
    s.cpu.per_metric_sample = ReadCpu(c, "per_metric_sample");
    c.Finish();
  }
  r.Finish();
  return s;
}

}  // namespace

Topology ReadTopology(const YAML::Node& node, const std::string& path, bool allow_version) {
  yaml::MapReader r(node, path);
  if (allow_version) {
    int64_t version = r.Get<int64_t>("version");
    if (version != 1) {
      yaml::Fail("UnsupportedVersion", r.Path("version"),
                 fmt::format("unsupported topology version {}", version), r.node()["version"]);
    }
  }
  Topology t;
  t.entry = r.Get<std::string>("entry");
  YAML::Node services = r.Required("services");
  yaml::ExpectSeq(services, r.Path("services"));
  for (size_t i = 0; i < services.size(); ++i) {
    t.services.push_back(ReadService(services[i], yaml::Index(r.Path("services"), i)));
  }
  r.Finish();
  return t;
}

void EmitTopology(YAML::Emitter& out, const Topology& t) {
  out << YAML::BeginMap;
  out << YAML::Key << "entry" << YAML::Value << t.entry;
  out << YAML::Key << "services" << YAML::Value << YAML::BeginSeq;
  for (const auto& s : t.services) {
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << s.name;
    out << YAML::Key << "latency_ms" << YAML::Value;
    EmitDistribution(out, s.latency);
    if (!s.calls.empty()) {
      out << YAML::Key << "calls" << YAML::Value << YAML::BeginSeq;
      for (const auto& c : s.calls) {
        out << YAML::Flow << YAML::BeginMap << YAML::Key << "service" << YAML::Value << c.callee
            << YAML::Key << "count" << YAML::Value << c.count;
        if (!c.sequential) out << YAML::Key << "sequential" << YAML::Value << false;
        out << YAML::EndMap;
      }
      out << YAML::EndSeq;
    }
    out << YAML::Key << "cost" << YAML::Value << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "base_per_second" << YAML::Value
        << yaml::FormatDouble(ToCpuSeconds(s.cpu.base_per_second));
    out << YAML::Key << "per_request" << YAML::Value
        << yaml::FormatDouble(ToCpuSeconds(s.cpu.per_request));
    out << YAML::Key << "per_span_exported" << YAML::Value
        << yaml::FormatDouble(ToCpuSeconds(s.cpu.per_span_exported));
    out << YAML::Key << "per_metric_sample" << YAML::Value
        << yaml::FormatDouble(ToCpuSeconds(s.cpu.per_metric_sample));
    out << YAML::EndMap;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::EndMap;
}

}  // namespace yaml_io

Topology ParseTopology(const std::string& text) {
  YAML::Node root = yaml::Parse(text, "topology");
  return yaml_io::ReadTopology(root, "", /*allow_version=*/true);
}

Topology LoadTopologyFile(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("Io", file, "cannot read topology file '" + file + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseTopology(ss.str());
}

std::string SerializeTopology(const Topology& topology) {
  YAML::Emitter body;
  yaml_io::EmitTopology(body, topology);
  return std::string("version: 1\n") + body.c_str() + "\n";
}

}  // namespace oxlab
