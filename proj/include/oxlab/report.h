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
#include <vector>

#include "oxlab/analysis.h"
#include "oxlab/assurance.h"
#include "oxlab/plan.h"
#include "oxlab/sue.h"

namespace oxlab {

inline constexpr const char* kEngineVersion = "0.1.0";

struct AlertOutcome {
  AlertRule rule;
  std::optional<double> latency_s;
};

// One response variable scored on one run.
struct ResponseScore {
  std::string response;
  VisibilityScore score;
};

struct RunDigest {
  int64_t repetition = 0;
  uint64_t seed = 0;
  double cpu_seconds = 0;
  int64_t requests = 0;
  int64_t failed_requests = 0;
  int64_t exported_traces = 0;
  int64_t exported_spans = 0;
  std::vector<ResponseScore> responses;
  std::vector<AlertOutcome> alerts;
};

// Repetitions of one response variable, pooled.
struct ResponseSummary {
  std::string response;
  int64_t runs = 0;
  int64_t scored_runs = 0;    // runs where both label classes had data
  int64_t detected_runs = 0;
  double balanced_accuracy = 0.5;  // mean over scored runs
  double effect_size = 0.5;
  double p_value = 1.0;            // median over scored runs

  bool defined() const { return scored_runs > 0; }
  // Detected in a strict majority of runs.
  bool detected() const { return 2 * detected_runs > runs; }
  std::string Verdict() const;
};

struct VariantSummary {
  std::string name;
  ParamMap overrides;
  InstrumentationConfig instrumentation;
  double cpu_seconds = 0;  // mean over repetitions
  OverheadReport overhead;
  std::vector<ResponseSummary> responses;
  // Mean over runs where the alert fired; nullopt if it never did.
  std::vector<AlertOutcome> alerts;
  std::vector<RunDigest> runs;

  const ResponseSummary* Response(const std::string& name) const;
  // Fastest mean alert latency.
  std::optional<double> DetectionLatency() const;
};

struct ExperimentReport {
  std::string plan_id;
  std::string baseline;
  std::optional<TimeWindow> fault_window;
  std::vector<std::string> response_names;
  std::vector<VariantSummary> variants;
  ErrorBudget budget;
  Recommendation recommendation;
};

// Scores every run and ranks the variants. `runs` is RunAll output.
ExperimentReport Assess(const ExperimentPlan& plan, const std::vector<RunResult>& runs,
                        const ErrorBudget& budget,
                        const TreatmentRegistry& registry = TreatmentRegistry::Default());

// assessment.json. `metadata` is appended last and holds everything that may
// differ between otherwise identical runs.
std::string AssessmentJson(const ExperimentReport& report, const std::map<std::string, std::string>& metadata);

// Human summary: one column per variant.
std::string SummaryTable(const ExperimentReport& report);

// ---------------------------------------------------------------------------
// Files

// Filesystem-safe form of a variant name.
std::string SafeFileName(const std::string& name);

std::string TracesJsonl(const RunResult& run);
std::string MetricsCsv(const RunResult& run);
std::string CostsJson(const RunResult& run);
std::string EventsJson(const RunResult& run);
// Writes traces.jsonl, metrics.csv, costs.json and events.json into `dir`.
void WriteRunDirectory(const std::string& dir, const RunResult& run);

// bin_start_s,mean_duration_ms,p95_duration_ms,n over root-span durations of
// all repetitions; floor(duration / bin) rows.
std::string PlotDataCsv(const std::vector<const RunResult*>& runs, int64_t duration_s, int64_t bin_s);

// Writes assessment.json, plotdata/ and runs/ under `out_dir`.
void WriteExperimentOutput(const std::string& out_dir, const ExperimentPlan& plan,
                           const std::vector<RunResult>& runs, const ExperimentReport& report,
                           const std::map<std::string, std::string>& metadata);

void WriteTextFile(const std::string& path, const std::string& text);

// ---------------------------------------------------------------------------
// Comparison of saved assessments

struct ComparedVariant {
  std::string experiment;
  std::string variant;
  std::map<std::string, double> visibility;  // response -> balanced accuracy
  double overhead_percent = 0;
};

struct Comparison {
  std::vector<std::string> response_names;
  std::vector<ComparedVariant> rows;
  // Row index of the reference each row's deltas are taken against.
  std::vector<size_t> reference;
};

// Throws ConfigError("IncompatibleAssessments") when the baselines or the
// response-variable sets differ, and ConfigError for unreadable inputs. Deltas are taken
// against the first assessment: the same-named variant, else the one at the
// same position.
Comparison CompareAssessments(const std::vector<std::string>& paths);
std::string ComparisonTable(const Comparison& comparison);

// JSON schema of the plan document.
std::string PlanJsonSchema(const TreatmentRegistry& registry = TreatmentRegistry::Default());

}  // namespace oxlab
