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
#include <string>
#include <vector>

#include "oxlab/topology.h"

namespace oxlab {

struct Span {
  uint64_t trace_id = 0;
  uint64_t span_id = 0;  // unique within the trace, depth-first from 1
  std::optional<uint64_t> parent;
  std::string service;
  int64_t start_us = 0;
  int64_t duration_us = 0;
  bool error = false;

  int64_t end_us() const { return start_us + duration_us; }
  bool operator==(const Span&) const = default;
};

// An exported trace. The first span is the root.
struct Trace {
  uint64_t trace_id = 0;
  std::vector<Span> spans;

  const Span& root() const { return spans.front(); }
  int64_t root_duration_us() const { return spans.empty() ? 0 : spans.front().duration_us; }
  int64_t start_us() const { return spans.empty() ? 0 : spans.front().start_us; }
  bool operator==(const Trace&) const = default;
};

struct MetricPoint {
  int64_t t_s = 0;
  double value = 0;
  bool operator==(const MetricPoint&) const = default;
};

// Series name -> samples in scrape order.
using MetricStore = std::map<std::string, std::vector<MetricPoint>>;

// Head-based sampling: keep iff hash(sampler_seed, trace_id) < rate * 2^64.
// The keep-set at a lower rate is a subset of the keep-set at a higher rate
// for the same seed.
bool HeadSample(uint64_t trace_id, double rate, uint64_t sampler_seed);

// Per-service counters the simulator accumulates between scrapes.
struct ServiceWindow {
  int64_t in_flight = 0;
  int64_t started = 0;
  int64_t ended = 0;
  int64_t errors = 0;
  int64_t ended_duration_us = 0;
  MicroCpu cpu = 0;

  void ResetInterval() {
    started = ended = errors = 0;
    ended_duration_us = 0;
    cpu = 0;
  }
};

// Emits one sample per per-service series at every t = k * interval within the
// run (t > 0). Scrapes are independent of trace sampling.
class MetricScraper {
 public:
  static constexpr int kSeriesPerService = 5;

  MetricScraper(const Topology& topology, int64_t interval_s, int64_t duration_s);

  int64_t interval_s() const { return interval_s_; }
  // Scrape times in microseconds, ascending.
  std::vector<int64_t> ScrapeTimes() const;

  // Appends one sample per series for every service and resets the interval
  // counters. Returns the number of samples taken per service.
  int Scrape(int64_t t_us, std::vector<ServiceWindow>& windows, MetricStore& out) const;

 private:
  std::vector<std::string> services_;
  std::vector<MicroCpu> base_cpu_;
  int64_t interval_s_;
  int64_t duration_s_;
};

struct ServiceCost {
  MicroCpu base = 0;
  MicroCpu requests = 0;
  MicroCpu spans = 0;
  MicroCpu metrics = 0;

  MicroCpu total() const { return base + requests + spans + metrics; }
  bool operator==(const ServiceCost&) const = default;
};

struct CostLedger {
  std::map<std::string, ServiceCost> services;

  MicroCpu total() const;
  double total_seconds() const { return ToCpuSeconds(total()); }
  bool operator==(const CostLedger&) const = default;
};

// Counts the simulator collects for cost settlement.
struct ServiceUsage {
  int64_t spans = 0;           // spans handled, sampled or not
  int64_t exported_spans = 0;  // spans actually exported
  int64_t metric_samples = 0;
  int64_t errors = 0;
  bool operator==(const ServiceUsage&) const = default;
};

// Linear CPU model: base * duration + per_request * spans + per_span_exported
// * exported spans + per_metric_sample * samples, per service.
CostLedger SettleCosts(const Topology& topology, const std::map<std::string, ServiceUsage>& usage,
                       int64_t duration_s);

// "12.34" style rendering used by reports.
std::string FormatCpuSeconds(MicroCpu micro);

}  // namespace oxlab
