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
#include "oxlab/params.h"
#include "oxlab/topology.h"
#include "oxlab/treatments.h"
#include "oxlab/workload.h"

namespace oxlab {

inline constexpr int kPlanVersion = 1;

// The run timeline. Ramp-up, steady state and cool-down partition
// [0, duration_s); the fault window sits inside the timeline.
struct PhaseSchedule {
  int64_t duration_s = 0;
  int64_t ramp_up_s = 0;
  int64_t cool_down_s = 0;
  std::optional<TimeWindow> fault_window;

  int64_t steady_s() const { return duration_s - ramp_up_s - cool_down_s; }
  bool operator==(const PhaseSchedule&) const = default;
};

struct ResponseSource {
  enum class Kind { kTraceDuration, kMetricSeries };
  Kind kind = Kind::kTraceDuration;
  std::string ref;  // entry service name or metric series name
  bool operator==(const ResponseSource&) const = default;
};

struct ResponseVariableSpec {
  std::string name;
  ResponseSource source;
  // Observations are averaged into bins of this width before scoring; 0 scores
  // raw observations.
  int64_t window_s = 0;
  bool operator==(const ResponseVariableSpec&) const = default;
};

struct VariantSpec {
  std::string name;
  ParamMap overrides;
  bool operator==(const VariantSpec&) const = default;
};

struct AnalysisConfig {
  double alpha = 0.01;
  double beta = 0.6;
  int64_t bin_width_s = 10;
  double budget_pressure = 0.25;
  bool operator==(const AnalysisConfig&) const = default;
};

// Either a path (relative to the plan file) or an inline topology.
using TopologyRef = std::variant<std::string, Topology>;

struct ExperimentPlan {
  std::string id;
  TopologyRef topology;
  WorkloadSpec workload;
  PhaseSchedule phases;
  std::vector<TreatmentSpec> treatments;
  std::vector<ResponseVariableSpec> response_variables;
  std::vector<VariantSpec> variants;
  std::string baseline;  // empty: first variant
  int64_t repetitions = 1;
  uint64_t base_seed = 0;
  AnalysisConfig analysis;

  // Declared variants, or a single implicit "default" variant.
  std::vector<VariantSpec> EffectiveVariants() const;
  std::string BaselineName() const;
  // The treatment's own window, falling back to the phase fault window.
  std::optional<TimeWindow> WindowOf(const TreatmentSpec& t) const;

  bool operator==(const ExperimentPlan&) const = default;
};

// Parses a plan document. Throws ConfigError on syntax errors (with line and
// column), unknown fields, type mismatches and duplicate variant names.
ExperimentPlan ParsePlan(const std::string& text);
std::string SerializePlan(const ExperimentPlan& plan);

// Checks the plan against the topology and the treatment registry. Returns an
// empty list for a runnable plan.
std::vector<Violation> ValidatePlan(const ExperimentPlan& plan, const Topology& topology,
                                    const TreatmentRegistry& registry = TreatmentRegistry::Default());

// The window observations are labeled against: the phase fault window, or
// else the first fault treatment's own window.
std::optional<TimeWindow> FaultWindow(const ExperimentPlan& plan,
                                      const TreatmentRegistry& registry = TreatmentRegistry::Default());

// Metric series names the simulator emits for a topology.
std::vector<std::string> MetricSeriesNames(const Topology& topology);

struct LoadedPlan {
  ExperimentPlan plan;
  Topology topology;
  std::string plan_path;
};

// Reads a plan file and resolves its topology reference relative to it.
LoadedPlan LoadPlanFile(const std::string& path);
Topology ResolveTopology(const ExperimentPlan& plan, const std::string& base_dir);

std::string ReadTextFile(const std::string& path);

}  // namespace oxlab
