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

#include "oxlab/plan.h"
#include "oxlab/sue.h"
#include "oxlab/treatments.h"

namespace oxlab {

struct Observation {
  double t_s = 0;
  double value = 0;
  bool operator==(const Observation&) const = default;
};

enum class Label { kNormal, kFault };

struct LabeledObservation {
  double t_s = 0;
  double value = 0;
  Label label = Label::kNormal;
};

// trace_duration: (root start, root duration ms) per exported trace rooted at
// the named service. metric: the raw series. Throws ConfigError for an
// unknown metric series.
std::vector<Observation> ExtractResponse(const RunResult& run, const ResponseSource& source);

// Averages observations into [k*width, (k+1)*width) bins; empty bins are
// dropped, each bin is reported at its start time.
std::vector<Observation> AggregateBins(const std::vector<Observation>& series, int64_t width_s);

// The series a response variable is scored on: extracted, then binned when
// the variable has a window.
std::vector<Observation> ResponseSeries(const RunResult& run, const ResponseVariableSpec& spec);

// label = fault iff t in [start, end).
std::vector<LabeledObservation> LabelObservations(const std::vector<Observation>& series,
                                                  const TimeWindow& fault_window);

struct MannWhitneyResult {
  double u = 0;            // pairs with a > b, ties count one half
  double effect_size = 0;  // u / (|a| |b|) = P(a > b) + P(a = b) / 2
  double p_greater = 1;    // one-sided, alternative: a stochastically larger
  double p_less = 1;       // one-sided, alternative: a stochastically smaller
  bool exact = false;
  // Exact path only: p-values as count / total over all label assignments.
  uint64_t exact_total = 0;
  uint64_t exact_greater = 0;
  uint64_t exact_less = 0;
};

// Sizes at or below this total use exact enumeration of label assignments.
inline constexpr size_t kExactMannWhitneyLimit = 12;

// Rank-sum test with midrank ties. Exact for |a| + |b| <= 12, otherwise the
// normal approximation with tie-corrected variance and continuity correction.
// All values identical: effect 0.5, both p-values 1. Requires non-empty
// inputs.
MannWhitneyResult MannWhitney(const std::vector<double>& a, const std::vector<double>& b);
// Forces the normal approximation regardless of size.
MannWhitneyResult MannWhitneyNormal(const std::vector<double>& a, const std::vector<double>& b);

struct VisibilityScore {
  bool defined = false;  // false: a label class had no observations
  double balanced_accuracy = 0.5;
  double threshold = 0;  // classify fault iff value >= threshold
  double effect_size = 0.5;
  double p_value = 1.0;
  int64_t n_fault = 0;
  int64_t n_normal = 0;
  bool detected = false;

  std::string Verdict() const;
};

inline constexpr const char* kNoDataVerdict = "undetectable \xE2\x80\x94 no data";

// Youden-optimal threshold classifier plus a rank-sum gate:
// detected iff p < alpha and balanced accuracy >= beta.
VisibilityScore ScoreVisibility(const std::vector<LabeledObservation>& labeled, double alpha = 0.01,
                                double beta = 0.6);

// Seconds from fault_start to the first scrape (t > fault_start) completing a
// run of `consecutive` samples strictly above the threshold; nullopt if the
// alert never fires.
std::optional<double> DetectionLatency(const std::vector<Observation>& series, const AlertRule& alert,
                                       double fault_start_s);

struct OverheadReport {
  double baseline_cpu = 0;
  double variant_cpu = 0;
  double overhead_percent = 0;

  // "+3.05%"
  std::string Formatted() const;
};

// Throws std::invalid_argument for a nonpositive baseline.
OverheadReport Overhead(double baseline_cpu, double variant_cpu);

}  // namespace oxlab
