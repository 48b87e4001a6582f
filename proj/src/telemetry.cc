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

#include "oxlab/telemetry.h"

#include <fmt/format.h>

#include <cmath>

#include "oxlab/rng.h"

namespace oxlab {

bool HeadSample(uint64_t trace_id, double rate, uint64_t sampler_seed) {
  if (!(rate > 0.0)) return false;
  if (rate >= 1.0) return true;
  auto threshold = static_cast<uint64_t>(std::ldexp(rate, 64));
  return HashKey({sampler_seed, trace_id}) < threshold;
}

MetricScraper::MetricScraper(const Topology& topology, int64_t interval_s, int64_t duration_s)
    : interval_s_(interval_s), duration_s_(duration_s) {
  for (const auto& s : topology.services) {
    services_.push_back(s.name);
    base_cpu_.push_back(s.cpu.base_per_second * interval_s + s.cpu.per_metric_sample * kSeriesPerService);
  }
}

std::vector<int64_t> MetricScraper::ScrapeTimes() const {
  std::vector<int64_t> out;
  if (interval_s_ <= 0) return out;
  for (int64_t t = interval_s_; t <= duration_s_; t += interval_s_) out.push_back(t * 1'000'000);
  return out;
}

int MetricScraper::Scrape(int64_t t_us, std::vector<ServiceWindow>& windows,
                          MetricStore& out) const {
  int64_t t_s = t_us / 1'000'000;
  double interval = static_cast<double>(interval_s_);
  for (size_t i = 0; i < services_.size(); ++i) {
    ServiceWindow& w = windows[i];
    const std::string& name = services_[i];
    double latency = w.ended > 0 ? static_cast<double>(w.ended_duration_us) / w.ended / 1000.0 : 0.0;
    out[name + ".cpu_seconds"].push_back({t_s, ToCpuSeconds(base_cpu_[i] + w.cpu)});
    out[name + ".error_rate"].push_back({t_s, w.errors / interval});
    out[name + ".in_flight"].push_back({t_s, static_cast<double>(w.in_flight)});
    out[name + ".latency_ms"].push_back({t_s, latency});
    out[name + ".request_rate"].push_back({t_s, w.started / interval});
    w.ResetInterval();
  }
  return kSeriesPerService;
}

MicroCpu CostLedger::total() const {
  MicroCpu sum = 0;
  for (const auto& [name, c] : services) sum += c.total();
  return sum;
}

CostLedger SettleCosts(const Topology& topology, const std::map<std::string, ServiceUsage>& usage,
                       int64_t duration_s) {
  CostLedger ledger;
  for (const auto& s : topology.services) {
    ServiceUsage u;
    if (auto it = usage.find(s.name); it != usage.end()) u = it->second;
    ServiceCost c;
    c.base = s.cpu.base_per_second * duration_s;
    c.requests = s.cpu.per_request * u.spans;
    c.spans = s.cpu.per_span_exported * u.exported_spans;
    c.metrics = s.cpu.per_metric_sample * u.metric_samples;
    ledger.services[s.name] = c;
  }
  return ledger;
}

std::string FormatCpuSeconds(MicroCpu micro) {
  return fmt::format("{:.2f}", ToCpuSeconds(micro));
}

}  // namespace oxlab
