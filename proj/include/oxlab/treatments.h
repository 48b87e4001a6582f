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
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "oxlab/errors.h"
#include "oxlab/params.h"
#include "oxlab/rng.h"

namespace oxlab {

struct ExperimentPlan;
struct VariantSpec;

enum class TreatmentKind { kFault, kInstrumentation };
enum class TargetKind { kGlobal, kService, kEdge, kMetric };

std::string_view TreatmentKindName(TreatmentKind kind);
std::string_view TargetKindName(TargetKind kind);

// What a treatment applies to. Edges are written "caller->callee".
struct Target {
  TargetKind kind = TargetKind::kGlobal;
  std::string service;  // kService: the service; kEdge: the caller; kMetric: metric name
  std::string callee;   // kEdge only

  static Target Global() { return {}; }
  static Target Service(std::string name) { return {TargetKind::kService, std::move(name), {}}; }
  static Target Edge(std::string from, std::string to) {
    return {TargetKind::kEdge, std::move(from), std::move(to)};
  }
  static Target Metric(std::string name) { return {TargetKind::kMetric, std::move(name), {}}; }

  // Parses "a->b" (or "a→b") as an edge, anything else as a service/metric name.
  static Target Parse(std::string_view text, TargetKind hint);
  std::string ToString() const;

  auto operator<=>(const Target&) const = default;
};

// Half-open [start_s, end_s) in whole seconds.
struct TimeWindow {
  int64_t start_s = 0;
  int64_t end_s = 0;

  bool ContainsMicros(int64_t t_us) const {
    return t_us >= start_s * 1'000'000 && t_us < end_s * 1'000'000;
  }
  bool ContainsSeconds(double t) const { return t >= start_s && t < end_s; }
  bool operator==(const TimeWindow&) const = default;
};

struct TreatmentSpec {
  std::string name;
  std::string type;  // registered treatment identifier, e.g. "network_delay"
  Target target;
  std::optional<TimeWindow> window;  // faults only; defaults to the plan fault window
  ParamMap params;

  bool operator==(const TreatmentSpec&) const = default;
};

// Context handed to a fault's perturbation callback for one call.
struct CallContext {
  int64_t time_us = 0;
  std::string_view caller;  // empty for the client -> entry call
  std::string_view callee;
  uint64_t trace_id = 0;
  int64_t window_start_us = 0;
  int64_t window_end_us = 0;
};

struct CallPerturbation {
  int64_t added_delay_us = 0;
  bool drop = false;  // call never reaches the callee
  bool kill = false;  // callee answers with an immediate error
  std::optional<int64_t> defer_until_us;
  double latency_factor = 1.0;

  void Merge(const CallPerturbation& other);
  bool operator==(const CallPerturbation&) const = default;
};

using Perturber = std::function<CallPerturbation(const CallContext&, Rng&)>;

struct AlertRule {
  std::string metric;
  double threshold = 0;
  int64_t consecutive = 1;
  bool operator==(const AlertRule&) const = default;
};

// Whole-run observability configuration produced by instrumentation
// treatments.
struct InstrumentationConfig {
  double trace_sampling_rate = 1.0;
  int64_t scrape_interval_s = 15;
  std::vector<AlertRule> alerts;
  std::set<std::string> disabled_services;

  bool SpansEnabled(std::string_view service) const {
    return !disabled_services.contains(std::string(service));
  }
  bool operator==(const InstrumentationConfig&) const = default;
};

struct ParamSpec {
  std::string name;
  ParamType type = ParamType::kNumber;
  bool required = false;
  std::optional<ParamValue> fallback;
  std::optional<double> min;
  std::optional<double> max;
  bool min_exclusive = false;
  std::string doc;
};

// Everything the engine needs to know about one treatment type. Built-ins are
// registered through the same interface as user extensions.
struct TreatmentDescriptor {
  std::string type;
  TreatmentKind kind = TreatmentKind::kFault;
  TargetKind target = TargetKind::kGlobal;
  std::vector<ParamSpec> params;
  std::string doc;

  // Optional cross-parameter checks; returns human-readable problems.
  std::function<std::vector<std::string>(const ParamMap&)> check;
  // Faults: builds the per-call perturbation from validated parameters.
  std::function<Perturber(const ParamMap&)> make_perturber;
  // Instrumentation: folds validated parameters into the run configuration.
  std::function<void(const ParamMap&, const Target&, InstrumentationConfig&)> configure;
  // Instrumentation: variant override key -> parameter name.
  std::map<std::string, std::string> override_keys;
};

class TreatmentRegistry {
 public:
  TreatmentRegistry() = default;

  // Throws ConfigError("DuplicateTreatment") if the type is already known.
  void Register(TreatmentDescriptor descriptor);
  const TreatmentDescriptor* Find(std::string_view type) const;
  std::vector<std::string> Types() const;

  struct OverrideTarget {
    const TreatmentDescriptor* descriptor = nullptr;
    std::string param;
  };
  // Resolves the alias part of a variant override key ("trace_sampling_rate",
  // "instrumentation_point@cart" -> alias "instrumentation_point").
  std::optional<OverrideTarget> ResolveOverride(std::string_view alias) const;

  // A registry holding only the built-in treatments.
  static TreatmentRegistry WithBuiltins();
  // Process-wide registry used when callers do not pass one. Register
  // extensions before starting runs.
  static TreatmentRegistry& Default();

 private:
  std::map<std::string, std::shared_ptr<const TreatmentDescriptor>, std::less<>> by_type_;
};

void RegisterBuiltinTreatments(TreatmentRegistry& registry);

// Parameter schema check for one treatment; paths are prefixed with `path`.
std::vector<Violation> ValidateParams(const TreatmentDescriptor& descriptor,
                                      const ParamMap& params, const std::string& path);
// Params with schema defaults filled in.
ParamMap WithDefaults(const TreatmentDescriptor& descriptor, const ParamMap& params);

// Splits "alias@target" into its parts.
std::pair<std::string, std::optional<std::string>> SplitOverrideKey(std::string_view key);

struct ScheduledFault {
  size_t index = 0;  // position among the plan's fault treatments
  std::string name;
  std::string type;
  Target target;
  TimeWindow window;
  ParamMap params;
  Perturber perturb;

  bool Matches(std::string_view caller, std::string_view callee) const;
};

struct ScheduleEvent {
  int64_t t_s = 0;
  bool activate = true;
  size_t fault = 0;  // index into TreatmentSchedule::faults

  bool operator==(const ScheduleEvent&) const = default;
};

// Immutable result of merging plan treatments with one variant.
struct TreatmentSchedule {
  std::vector<ScheduledFault> faults;
  std::vector<ScheduleEvent> events;  // time-ordered; deactivations first on ties
  InstrumentationConfig instrumentation;
};

// Throws ConfigError("ConflictingInstrumentation") when two instrumentation
// treatments share a type and target, and ConfigError for unresolvable
// overrides. Expects a validated plan.
TreatmentSchedule CompileTreatments(const ExperimentPlan& plan, const VariantSpec& variant,
                                    const TreatmentRegistry& registry = TreatmentRegistry::Default());

// Invokes the fault's callback. The call must fall inside the fault window.
CallPerturbation ApplyFault(const ScheduledFault& fault, const CallContext& context, Rng& rng);

}  // namespace oxlab
