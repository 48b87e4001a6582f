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

#include <gtest/gtest.h>

#include "oxlab/plan.h"
#include "oxlab/sue.h"
#include "oxlab/telemetry.h"
#include "test_util.h"

namespace oxlab {
namespace {

TEST(HeadSampleTest, Extremes) {
  for (uint64_t id = 0; id < 1000; ++id) {
    EXPECT_FALSE(HeadSample(id, 0.0, 9));
    EXPECT_TRUE(HeadSample(id, 1.0, 9));
  }
}

TEST(HeadSampleTest, RateAndSubsets) {
  int kept = 0;
  for (uint64_t id = 0; id < 100'000; ++id) kept += HeadSample(id, 0.05, 42);
  EXPECT_GE(kept, 4793);
  EXPECT_LE(kept, 5207);
  const double rates[] = {0.01, 0.05, 0.10, 0.5};
  for (uint64_t id = 0; id < 10'000; ++id) {
    for (size_t i = 1; i < std::size(rates); ++i) {
      if (HeadSample(id, rates[i - 1], 42)) EXPECT_TRUE(HeadSample(id, rates[i], 42)) << id;
    }
  }
}

TEST(HeadSampleTest, Deterministic) {
  for (uint64_t id = 0; id < 1000; ++id) EXPECT_EQ(HeadSample(id, 0.3, 1), HeadSample(id, 0.3, 1));
}

TEST(ScraperTest, Cadence) {
  Topology t = testing::ChainTopology();
  EXPECT_EQ(MetricScraper(t, 15, 600).ScrapeTimes().size(), 40u);
  EXPECT_EQ(MetricScraper(t, 7, 600).ScrapeTimes().size(), 85u);
  EXPECT_TRUE(MetricScraper(t, 900, 600).ScrapeTimes().empty());
  auto times = MetricScraper(t, 15, 600).ScrapeTimes();
  EXPECT_EQ(times.front(), 15'000'000);
  EXPECT_EQ(times.back(), 600'000'000);
}

TEST(ScraperTest, SeriesPerService) {
  Topology t = testing::ChainTopology();
  MetricScraper s(t, 10, 60);
  std::vector<ServiceWindow> w(2);
  w[0].started = 20;
  w[0].ended = 10;
  w[0].ended_duration_us = 50'000;
  w[0].errors = 5;
  w[0].in_flight = 3;
  MetricStore store;
  EXPECT_EQ(s.Scrape(10'000'000, w, store), MetricScraper::kSeriesPerService);
  EXPECT_EQ(store.size(), 10u);
  EXPECT_DOUBLE_EQ(store.at("A.request_rate")[0].value, 2.0);
  EXPECT_DOUBLE_EQ(store.at("A.error_rate")[0].value, 0.5);
  EXPECT_DOUBLE_EQ(store.at("A.latency_ms")[0].value, 5.0);
  EXPECT_DOUBLE_EQ(store.at("A.in_flight")[0].value, 3.0);
  EXPECT_EQ(store.at("A.in_flight")[0].t_s, 10);
  EXPECT_EQ(w[0].started, 0);
  EXPECT_EQ(w[0].in_flight, 3);
}

TEST(ScraperTest, MetricsIndependentOfSampling) {
  LoadedPlan lp = testing::DemoPlan();
  RunResult a = SimulateRun(lp.plan, lp.topology, {"none", {{"trace_sampling_rate", 0.0}}}, 5);
  RunResult b = SimulateRun(lp.plan, lp.topology, {"all", {{"trace_sampling_rate", 1.0}}}, 5);
  EXPECT_TRUE(a.traces.empty());
  for (const auto& [name, series] : a.metrics) {
    ASSERT_EQ(series.size(), 40u) << name;
    if (name.ends_with(".cpu_seconds")) continue;
    EXPECT_EQ(series, b.metrics.at(name)) << name;
  }
}

TEST(ScraperTest, ClosedLoopInFlight) {
  Topology t;
  t.entry = "svc";
  t.services = {{"svc", ConstantMs{10}, {}, {}}};
  ExperimentPlan p = testing::BasicPlan(t, 30);
  p.workload.profile = ConstantLoad{1};
  p.workload.think_time = ConstantMs{0};
  p.treatments.push_back({"scrape", "metric_scrape_interval", Target::Global(), std::nullopt, {{"seconds", 1.0}}});
  RunResult r = SimulateRun(p, t, {"default", {}}, 1);
  const auto& series = r.metrics.at("svc.in_flight");
  ASSERT_EQ(series.size(), 30u);
  // Users stop issuing at the end of the run, so the last scrape sees none.
  for (size_t i = 0; i + 1 < series.size(); ++i) EXPECT_EQ(series[i].value, 1.0) << series[i].t_s;
  EXPECT_EQ(series.back().value, 0.0);
}

TEST(CostTest, BaseOnly) {
  Topology t;
  t.entry = "svc";
  ServiceSpec s{"svc", ConstantMs{1}, {}, {}};
  s.cpu.base_per_second = ToMicroCpu(0.1);
  t.services = {s};
  CostLedger c = SettleCosts(t, {}, 10);
  EXPECT_EQ(c.total(), ToMicroCpu(1.0));
  EXPECT_EQ(FormatCpuSeconds(c.total()), "1.00");
}

TEST(CostTest, Linear) {
  Topology t = testing::DemoTopology();
  std::map<std::string, ServiceUsage> u;
  u["cart"] = {100, 7, 40, 0};
  CostLedger c = SettleCosts(t, u, 600);
  const ServiceSpec& cart = *t.Find("cart");
  EXPECT_EQ(c.services.at("cart").requests, cart.cpu.per_request * 100);
  EXPECT_EQ(c.services.at("cart").spans, cart.cpu.per_span_exported * 7);
  EXPECT_EQ(c.services.at("cart").metrics, cart.cpu.per_metric_sample * 40);
  EXPECT_EQ(c.services.at("cart").base, cart.cpu.base_per_second * 600);
  EXPECT_EQ(c.services.size(), t.services.size());
}

// Two variants differing only in sampling rate: the ledger gap is exactly the
// per-span export cost of the extra spans.
TEST(CostTest, SamplingDifferenceIsExportCost) {
  LoadedPlan lp = testing::DemoPlan();
  RunResult lo = SimulateRun(lp.plan, lp.topology, lp.plan.variants[0], 11);
  RunResult hi = SimulateRun(lp.plan, lp.topology, lp.plan.variants[2], 11);
  EXPECT_EQ(lo.requests, hi.requests);
  EXPECT_GT(hi.exported_spans(), lo.exported_spans());
  for (const auto& s : lp.topology.services) {
    const auto& a = lo.costs.services.at(s.name);
    const auto& b = hi.costs.services.at(s.name);
    int64_t d_spans = hi.usage.at(s.name).exported_spans - lo.usage.at(s.name).exported_spans;
    EXPECT_EQ(b.total() - a.total(), s.cpu.per_span_exported * d_spans) << s.name;
  }
  EXPECT_GT(hi.costs.total(), lo.costs.total());
}

TEST(CostTest, LedgerMatchesUsage) {
  LoadedPlan lp = testing::DemoPlan();
  RunResult r = SimulateRun(lp.plan, lp.topology, lp.plan.variants[1], 3);
  EXPECT_EQ(r.costs, SettleCosts(lp.topology, r.usage, r.duration_s));
  for (const auto& s : lp.topology.services) EXPECT_EQ(r.usage.at(s.name).metric_samples, 40 * 5);
}

}  // namespace
}  // namespace oxlab
