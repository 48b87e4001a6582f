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

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "oxlab/errors.h"
#include "oxlab/rng.h"

namespace YAML {
class Node;
class Emitter;
}  // namespace YAML

namespace oxlab {

// CPU cost is accounted in integer micro-cpu-seconds so ledger sums are exact.
using MicroCpu = int64_t;

constexpr MicroCpu ToMicroCpu(double seconds) {
  return static_cast<MicroCpu>(seconds * 1e6 + (seconds >= 0 ? 0.5 : -0.5));
}
constexpr double ToCpuSeconds(MicroCpu micro) { return static_cast<double>(micro) / 1e6; }

// Latency / think-time distribution in milliseconds.
struct ConstantMs {
  double ms = 0;
  bool operator==(const ConstantMs&) const = default;
};
struct UniformMs {
  double lo = 0;
  double hi = 0;
  bool operator==(const UniformMs&) const = default;
};
// exp(N(mu, sigma)) milliseconds.
struct LogNormalMs {
  double mu = 0;
  double sigma = 0;
  bool operator==(const LogNormalMs&) const = default;
};

class Distribution {
 public:
  Distribution() = default;
  Distribution(ConstantMs c) : v_(c) {}
  Distribution(UniformMs u) : v_(u) {}
  Distribution(LogNormalMs l) : v_(l) {}

  // Draws in milliseconds. Constant consumes no draws, uniform one, lognormal
  // two. Golden tests depend on this.
  double SampleMs(Rng& rng) const;
  int64_t SampleMicros(Rng& rng) const;

  // Non-empty message when parameters are invalid (negative, lo > hi, ...).
  std::string Check() const;
  double MeanMs() const;

  const auto& value() const { return v_; }
  bool operator==(const Distribution&) const = default;

 private:
  std::variant<ConstantMs, UniformMs, LogNormalMs> v_;
};

struct CostParams {
  MicroCpu base_per_second = 0;
  MicroCpu per_request = 0;
  MicroCpu per_span_exported = 0;
  MicroCpu per_metric_sample = 0;
  bool operator==(const CostParams&) const = default;
};

struct CallSpec {
  std::string callee;
  int64_t count = 1;
  bool sequential = true;
  bool operator==(const CallSpec&) const = default;
};

struct ServiceSpec {
  std::string name;
  Distribution latency;
  std::vector<CallSpec> calls;
  CostParams cpu;
  bool operator==(const ServiceSpec&) const = default;
};

struct Topology {
  std::vector<ServiceSpec> services;
  std::string entry;

  std::optional<size_t> IndexOf(std::string_view name) const;
  const ServiceSpec* Find(std::string_view name) const;
  bool HasEdge(std::string_view from, std::string_view to) const;

  bool operator==(const Topology&) const = default;
};

// Entry exists, names unique, callees exist, graph acyclic, parameters
// non-negative, only sequential calls.
std::vector<Violation> ValidateTopology(const Topology& topology,
                                        const std::string& path = "topology");

Topology ParseTopology(const std::string& text);
Topology LoadTopologyFile(const std::string& file);
std::string SerializeTopology(const Topology& topology);

namespace yaml_io {
Distribution ReadDistribution(const YAML::Node& node, const std::string& path);
void EmitDistribution(YAML::Emitter& out, const Distribution& d);
Topology ReadTopology(const YAML::Node& node, const std::string& path, bool allow_version);
void EmitTopology(YAML::Emitter& out, const Topology& t);
}  // namespace yaml_io

}  // namespace oxlab
