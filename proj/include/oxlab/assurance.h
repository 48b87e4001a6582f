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
#include <vector>

#include "oxlab/analysis.h"
#include "oxlab/plan.h"
#include "oxlab/topology.h"
#include "oxlab/treatments.h"

namespace oxlab {

// ---------------------------------------------------------------------------
// Error budget
// ---------------------------------------------------------------------------

// Minutes are tracked internally as integer tenths so budget arithmetic is
// exact.
int64_t MinutesToTenths(double minutes);
double TenthsToMinutes(int64_t tenths);

struct SloPolicy {
  double availability_target = 0.999;  // in (0, 1]
  int64_t period_days = 90;
  int64_t consumed_tenths = 0;

  double consumed_minutes() const { return TenthsToMinutes(consumed_tenths); }
  bool operator==(const SloPolicy&) const = default;
};

struct ErrorBudget {
  int64_t total_tenths = 0;
  int64_t consumed_tenths = 0;
  int64_t remaining_tenths = 0;

  double total_minutes() const { return TenthsToMinutes(total_tenths); }
  double remaining_minutes() const { return TenthsToMinutes(remaining_tenths); }
  // 0 when the budget is zero or exhausted.
  double remaining_fraction() const;
  bool exhausted() const { return remaining_tenths == 0; }
};

// total = (1 - target) * period * 24 * 60 minutes; remaining clamps at zero.
ErrorBudget ComputeErrorBudget(const SloPolicy& policy);
// Throws std::invalid_argument for negative downtime or an invalid policy.
SloPolicy RecordIncident(SloPolicy policy, double downtime_minutes);
std::string CheckPolicy(const SloPolicy& policy);

struct IncidentRecord {
  double minutes = 0;
  std::string note;
  bool operator==(const IncidentRecord&) const = default;
};

// budget.json: {target, period_days, consumed_minutes, history[]}.
struct BudgetLedger {
  SloPolicy policy;
  std::vector<IncidentRecord> history;
  bool operator==(const BudgetLedger&) const = default;
};

// Missing file -> nullopt. Malformed file -> ConfigError.
std::optional<BudgetLedger> LoadBudgetLedger(const std::string& path);
// Writes through a temporary file and rename.
void SaveBudgetLedger(const std::string& path, const BudgetLedger& ledger);

// Exclusive advisory lock on "<ledger>.lock" for the lifetime of the object.
class LedgerLock {
 public:
  explicit LedgerLock(const std::string& ledger_path);
  ~LedgerLock();
  LedgerLock(const LedgerLock&) = delete;
  LedgerLock& operator=(const LedgerLock&) = delete;

 private:
  int fd_ = -1;
};

// Locked read-modify-write of the ledger. A missing ledger starts from the
// default policy.
BudgetLedger AppendIncident(const std::string& path, double downtime_minutes,
                            const std::string& note = {});
BudgetLedger SetPolicy(const std::string& path, double target, int64_t period_days);

// ---------------------------------------------------------------------------
// Postmortem scenarios
// ---------------------------------------------------------------------------

struct MustDetect {
  std::string response;
  double max_latency_s = 0;
  bool operator==(const MustDetect&) const = default;
};

struct MustScore {
  std::string response;
  double min_balanced_accuracy = 0;
  bool operator==(const MustScore&) const = default;
};

struct ScenarioExpectations {
  std::optional<MustDetect> must_detect;
  std::optional<MustScore> must_score;
  bool operator==(const ScenarioExpectations&) const = default;
};

// A past incident replayed as a regression experiment.
struct IncidentScenario {
  std::string id;
  std::string description;
  WorkloadSpec workload;
  PhaseSchedule phases;
  std::vector<TreatmentSpec> treatments;
  std::vector<ResponseVariableSpec> response_variables;
  ScenarioExpectations expect;
  uint64_t seed = 0;
  int64_t repetitions = 1;
  AnalysisConfig analysis;
};

IncidentScenario ParseScenario(const std::string& text);

// Variant set the suite runs every scenario under; `current` is the variant
// whose failures fail the suite.
struct SuiteVariants {
  std::vector<VariantSpec> variants;
  std::string current;
};

SuiteVariants ParseSuiteVariants(const std::string& text);

struct ScenarioSource {
  std::string file;
  std::optional<IncidentScenario> scenario;
  std::string error;  // set when the file failed to parse
};

// All *.yaml / *.yml files in the directory, sorted by name.
std::vector<ScenarioSource> LoadScenarioDir(const std::string& dir);

// The plan a scenario runs as under one variant.
ExperimentPlan ScenarioPlan(const IncidentScenario& scenario, const Topology& topology,
                            const VariantSpec& variant);

struct ScenarioOutcome {
  std::string scenario;
  std::string variant;
  bool passed = false;
  bool current = false;
  std::string verdict;  // "pass", "not detected", "latency exceeded", ...
  std::string detail;
  std::optional<double> detection_latency_s;
  std::optional<double> balanced_accuracy;
};

struct ScenarioError {
  std::string scenario;
  std::string message;
};

struct SuiteReport {
  std::string current;
  std::vector<ScenarioOutcome> outcomes;  // scenario order, then variant order
  std::vector<ScenarioError> errors;

  // 0: all current-variant checks pass; 1: a current-variant check failed;
  // 2: a scenario could not be loaded or validated.
  int ExitCode() const;
};

SuiteReport RunScenarioSuite(const std::vector<ScenarioSource>& scenarios, const Topology& topology,
                             const SuiteVariants& variants, int jobs = 1,
                             const TreatmentRegistry& registry = TreatmentRegistry::Default());

std::string SuiteJUnitXml(const SuiteReport& report);

// ---------------------------------------------------------------------------
// Recommendations
// ---------------------------------------------------------------------------

struct VariantAssessment {
  std::string name;
  bool defined = true;      // false: no data to score
  double visibility = 0.5;  // balanced accuracy
  bool detected = false;
  std::optional<double> detection_latency_s;
  double overhead_percent = 0;
};

struct RankedVariant {
  VariantAssessment assessment;
  int front = 0;  // Pareto layer on (visibility, -overhead); 0 = not dominated
  std::string verdict;
};

struct Recommendation {
  std::vector<RankedVariant> ranking;
  bool budget_pressure = false;
  std::string rationale;
};

// Ranks Pareto fronts on (visibility, -overhead) in order. Within a front:
// under budget pressure (remaining fraction < theta) by detection latency then
// overhead; otherwise detected variants by overhead, then undetected ones by
// visibility.
Recommendation Recommend(const std::vector<VariantAssessment>& variants, const ErrorBudget& budget,
                         double theta = 0.25);

}  // namespace oxlab
