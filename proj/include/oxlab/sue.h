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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oxlab/plan.h"
#include "oxlab/rng.h"
#include "oxlab/telemetry.h"
#include "oxlab/topology.h"
#include "oxlab/treatments.h"

namespace oxlab {

struct TreatmentEventRecord {
  int64_t t_s = 0;
  std::string treatment;
  std::string type;
  std::string target;
  bool activate = true;
  bool operator==(const TreatmentEventRecord&) const = default;
};

// Everything one seeded run produced.
struct RunResult {
  std::string variant;
  int64_t repetition = 0;
  uint64_t seed = 0;
  int64_t duration_s = 0;
  InstrumentationConfig instrumentation;
  std::vector<Trace> traces;  // exported (sampled) traces, in issue order
  MetricStore metrics;
  CostLedger costs;
  std::vector<TreatmentEventRecord> events;
  std::map<std::string, ServiceUsage> usage;
  int64_t requests = 0;
  int64_t failed_requests = 0;

  int64_t exported_spans() const;
  bool operator==(const RunResult&) const = default;
};

// Seed for (variant v, repetition k): HashKey({base_seed, v, k}).
uint64_t SplitSeed(uint64_t base_seed, uint64_t variant, uint64_t repetition);

// Spans of one request, depth-first, root first. `failed` is set when the
// request errored anywhere along the tree.
struct SpanTree {
  std::vector<Span> spans;
  int64_t end_us = 0;
  bool failed = false;
};

// Builds the synchronous call tree for a request arriving at `service` at
// `start_us`. Service latencies come from `latency_rng` depth-first; fault
// callbacks draw from `fault_rng` and run only for faults whose window
// contains the call time.
SpanTree BuildCallTree(const Topology& topology, size_t service, int64_t start_us,
                       uint64_t trace_id, Rng& latency_rng, Rng& fault_rng,
                       std::span<const ScheduledFault> faults);

// Runs one experiment arm. Deterministic in (plan, topology, schedule, seed).
// Throws ConfigError for a nonpositive duration.
RunResult SimulateSchedule(const ExperimentPlan& plan, const Topology& topology,
                           const TreatmentSchedule& schedule, const std::string& variant,
                           uint64_t seed);

RunResult SimulateRun(const ExperimentPlan& plan, const Topology& topology,
                      const VariantSpec& variant, uint64_t seed,
                      const TreatmentRegistry& registry = TreatmentRegistry::Default());

// All variants x repetitions, ordered by (variant, repetition) regardless of
// how many worker threads ran them.
std::vector<RunResult> RunAll(const ExperimentPlan& plan, const Topology& topology, int jobs = 1,
                              const TreatmentRegistry& registry = TreatmentRegistry::Default());

}  // namespace oxlab
