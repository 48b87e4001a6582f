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

#include <algorithm>
#include <atomic>
#include <cmath>

#include "oxlab/plan.h"
#include "oxlab/sue.h"
#include "oxlab/treatments.h"
#include "test_util.h"

namespace oxlab {
namespace {

using testing::Codes;

ScheduledFault MakeFault(const std::string& type, ParamMap params, TimeWindow window = {0, 100},
                         const TreatmentRegistry& registry = TreatmentRegistry::Default()) {
  const TreatmentDescriptor* d = registry.Find(type);
  ScheduledFault f;
  f.type = type;
  f.window = window;
  f.params = WithDefaults(*d, params);
  f.perturb = d->make_perturber(f.params);
  return f;
}

CallContext InWindow(const ScheduledFault& f) {
  return {f.window.start_s * 1'000'000, "A", "B", 1, f.window.start_s * 1'000'000, f.window.end_s * 1'000'000};
}

TEST(TargetTest, Parse) {
  EXPECT_EQ(Target::Parse("a->b", TargetKind::kService), Target::Edge("a", "b"));
  EXPECT_EQ(Target::Parse("a→b", TargetKind::kService), Target::Edge("a", "b"));
  EXPECT_EQ(Target::Parse("cart", TargetKind::kService), Target::Service("cart"));
  EXPECT_EQ(Target::Edge("a", "b").ToString(), "a->b");
}

TEST(TimeWindowTest, HalfOpen) {
  TimeWindow w{240, 360};
  EXPECT_TRUE(w.ContainsSeconds(240));
  EXPECT_FALSE(w.ContainsSeconds(360));
  EXPECT_TRUE(w.ContainsMicros(359'999'999));
  EXPECT_FALSE(w.ContainsMicros(239'999'999));
}

TEST(ApplyFaultTest, DegenerateDelay) {
  ScheduledFault f = MakeFault("network_delay", {{"min_ms", 50.0}, {"max_ms", 50.0}});
  Rng rng(1);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(ApplyFault(f, InWindow(f), rng).added_delay_us, 50'000);
}

TEST(ApplyFaultTest, UniformDelayMean) {
  ScheduledFault f = MakeFault("network_delay", {{"min_ms", 0.0}, {"max_ms", 90.0}});
  Rng rng(2024);
  double sum = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    int64_t d = ApplyFault(f, InWindow(f), rng).added_delay_us;
    ASSERT_GE(d, 0);
    ASSERT_LE(d, 90'000);
    sum += static_cast<double>(d) / 1000.0;
  }
  // 3 sigma of the mean is 3 * 90 / sqrt(12 n) = 0.25 ms.
  EXPECT_NEAR(sum / n, 45.0, 1.0);
}

TEST(ApplyFaultTest, ConstantDistributionUsesMax) {
  ScheduledFault f = MakeFault("network_delay", {{"min_ms", 10.0}, {"max_ms", 30.0}, {"distribution", std::string("constant")}});
  Rng rng(1);
  EXPECT_EQ(ApplyFault(f, InWindow(f), rng).added_delay_us, 30'000);
}

TEST(ApplyFaultTest, PacketLoss) {
  Rng rng(3);
  ScheduledFault never = MakeFault("packet_loss", {{"probability", 0.0}});
  ScheduledFault always = MakeFault("packet_loss", {{"probability", 1.0}});
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(ApplyFault(never, InWindow(never), rng), CallPerturbation{});
    EXPECT_TRUE(ApplyFault(always, InWindow(always), rng).drop);
  }
}

TEST(ApplyFaultTest, PauseAndKill) {
  Rng rng(3);
  ScheduledFault pause = MakeFault("service_pause", {}, {10, 20});
  EXPECT_EQ(ApplyFault(pause, InWindow(pause), rng).defer_until_us, 20'000'000);
  ScheduledFault kill = MakeFault("service_kill", {}, {10, 20});
  EXPECT_TRUE(ApplyFault(kill, InWindow(kill), rng).kill);
}

TEST(ApplyFaultTest, RefusesOutsideWindow) {
  ScheduledFault f = MakeFault("service_kill", {}, {10, 20});
  Rng rng(1);
  CallContext ctx = InWindow(f);
  ctx.time_us = 20'000'000;
  EXPECT_THROW(ApplyFault(f, ctx, rng), std::logic_error);
}

TEST(RegistryTest, BuiltinsPresent) {
  auto types = TreatmentRegistry::WithBuiltins().Types();
  for (const char* t : {"network_delay", "packet_loss", "service_pause", "service_kill", "trace_sampling_rate",
                        "metric_scrape_interval", "alert_threshold", "instrumentation_point"}) {
    EXPECT_NE(std::find(types.begin(), types.end(), t), types.end()) << t;
  }
}

TEST(RegistryTest, DuplicateRejected) {
  TreatmentRegistry reg = TreatmentRegistry::WithBuiltins();
  TreatmentDescriptor d = *reg.Find("network_delay");
  try {
    reg.Register(d);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.code(), "DuplicateTreatment");
  }
}

TEST(RegistryTest, OverrideAliases) {
  const auto& reg = TreatmentRegistry::Default();
  auto r = reg.ResolveOverride("trace_sampling_rate");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->descriptor->type, "trace_sampling_rate");
  EXPECT_EQ(r->param, "rate");
  EXPECT_EQ(reg.ResolveOverride("alert_consecutive")->param, "consecutive");
  EXPECT_FALSE(reg.ResolveOverride("min_ms"));
  EXPECT_EQ(SplitOverrideKey("instrumentation_point@cart"),
            (std::pair<std::string, std::optional<std::string>>{"instrumentation_point", "cart"}));
  EXPECT_EQ(SplitOverrideKey("trace_sampling_rate").second, std::nullopt);
}

TEST(CompileTest, VariantOverrideWins) {
  LoadedPlan lp = testing::DemoPlan();
  VariantSpec b = lp.plan.variants[2];
  TreatmentSchedule s = CompileTreatments(lp.plan, b);
  EXPECT_DOUBLE_EQ(s.instrumentation.trace_sampling_rate, 0.10);
  VariantSpec none{"none", {}};
  EXPECT_DOUBLE_EQ(CompileTreatments(lp.plan, none).instrumentation.trace_sampling_rate, 0.01);
}

TEST(CompileTest, EmptyPlan) {
  ExperimentPlan p = testing::BasicPlan(testing::ChainTopology());
  TreatmentSchedule s = CompileTreatments(p, VariantSpec{"default", {}});
  EXPECT_TRUE(s.faults.empty());
  EXPECT_TRUE(s.events.empty());
  EXPECT_EQ(s.instrumentation, InstrumentationConfig{});
}

TEST(CompileTest, DisjointWindowsOrdered) {
  ExperimentPlan p = testing::BasicPlan(testing::ChainTopology(), 100);
  TreatmentSpec late{"late", "network_delay", Target::Edge("A", "B"), TimeWindow{50, 70}, {{"min_ms", 1.0}, {"max_ms", 2.0}}};
  TreatmentSpec early{"early", "network_delay", Target::Edge("A", "B"), TimeWindow{10, 50}, {{"min_ms", 1.0}, {"max_ms", 2.0}}};
  p.treatments = {late, early};
  ASSERT_TRUE(ValidatePlan(p, testing::ChainTopology()).empty());
  TreatmentSchedule s = CompileTreatments(p, VariantSpec{"default", {}});
  ASSERT_EQ(s.events.size(), 4u);
  std::vector<std::tuple<int64_t, bool, std::string>> got;
  for (const auto& e : s.events) got.emplace_back(e.t_s, e.activate, s.faults[e.fault].name);
  std::vector<std::tuple<int64_t, bool, std::string>> want{
      {10, true, "early"}, {50, false, "early"}, {50, true, "late"}, {70, false, "late"}};
  EXPECT_EQ(got, want);
}

TEST(CompileTest, ConflictingInstrumentation) {
  ExperimentPlan p = testing::BasicPlan(testing::ChainTopology());
  p.treatments = {{"s1", "trace_sampling_rate", Target::Global(), std::nullopt, {{"rate", 0.1}}},
                  {"s2", "trace_sampling_rate", Target::Global(), std::nullopt, {{"rate", 0.2}}}};
  try {
    CompileTreatments(p, VariantSpec{"default", {}});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.code(), "ConflictingInstrumentation");
  }
  auto v = ValidatePlan(p, testing::ChainTopology());
  ASSERT_FALSE(v.empty());
}

TEST(CompileTest, PrecedenceIndependentOfOrder) {
  LoadedPlan lp = testing::DemoPlan();
  ExperimentPlan reversed = lp.plan;
  std::reverse(reversed.treatments.begin(), reversed.treatments.end());
  VariantSpec v{"v", {{"alert_threshold@request_latency", 300.0}, {"trace_sampling_rate", 0.5}}};
  EXPECT_EQ(CompileTreatments(lp.plan, v).instrumentation, CompileTreatments(reversed, v).instrumentation);
  InstrumentationConfig cfg = CompileTreatments(lp.plan, v).instrumentation;
  ASSERT_EQ(cfg.alerts.size(), 1u);
  EXPECT_DOUBLE_EQ(cfg.alerts[0].threshold, 300.0);
  EXPECT_EQ(cfg.alerts[0].consecutive, 2);
}

TEST(CompileTest, OverrideCreatesMissingTreatment) {
  ExperimentPlan p = testing::BasicPlan(testing::ChainTopology());
  VariantSpec v{"v", {{"instrumentation_point@B", false}, {"metric_scrape_interval", 5.0}}};
  p.variants = {v};
  ASSERT_TRUE(ValidatePlan(p, testing::ChainTopology()).empty());
  InstrumentationConfig cfg = CompileTreatments(p, v).instrumentation;
  EXPECT_TRUE(cfg.disabled_services.contains("B"));
  EXPECT_EQ(cfg.scrape_interval_s, 5);
}

// The extension fixture: multiplies the target service's own latency while
// active.
TreatmentDescriptor CpuContention() {
  TreatmentDescriptor d;
  d.type = "cpu_contention";
  d.kind = TreatmentKind::kFault;
  d.target = TargetKind::kService;
  ParamSpec factor;
  factor.name = "factor";
  factor.type = ParamType::kNumber;
  factor.required = true;
  factor.min = 1.0;
  d.params = {factor};
  d.make_perturber = [](const ParamMap& p) -> Perturber {
    double f = NumberOr(p, "factor", 1.0);
    return [f](const CallContext&, Rng&) {
      CallPerturbation out;
      out.latency_factor = f;
      return out;
    };
  };
  return d;
}

TEST(ExtensionTest, CpuContentionUsableFromPlan) {
  TreatmentRegistry reg = TreatmentRegistry::WithBuiltins();
  reg.Register(CpuContention());
  ExperimentPlan p = ParsePlan(R"(version: 1
id: contention
topology:
  entry: A
  services:
    - {name: A, latency_ms: 10, calls: [{service: B}]}
    - {name: B, latency_ms: 20}
phases: {duration_s: 10, fault_window_s: [4, 6]}
treatments:
  - {name: hog, type: cpu_contention, target: B, params: {factor: 2}}
)");
  Topology t = std::get<Topology>(p.topology);
  ASSERT_TRUE(ValidatePlan(p, t, reg).empty()) << FormatViolations(ValidatePlan(p, t, reg));
  EXPECT_EQ(Codes(ValidatePlan(p, t)), std::set<std::string>{"UnknownTreatment"});

  RunResult r = SimulateRun(p, t, VariantSpec{"default", {}}, 1, reg);
  int in = 0, out = 0;
  for (const auto& tr : r.traces) {
    const Span& b = tr.spans[1];
    if (TimeWindow{4, 6}.ContainsMicros(b.start_us)) {
      EXPECT_EQ(tr.root_duration_us(), 50'000);
      ++in;
    } else {
      EXPECT_EQ(tr.root_duration_us(), 30'000);
      ++out;
    }
  }
  EXPECT_GT(in, 0);
  EXPECT_GT(out, 0);

  p.treatments[0].params["factor"] = 0.5;
  EXPECT_FALSE(ValidatePlan(p, t, reg).empty());
}

TEST(ExtensionTest, WindowDiscipline) {
  auto calls = std::make_shared<std::atomic<int>>(0);
  auto outside = std::make_shared<std::atomic<int>>(0);
  TreatmentDescriptor d;
  d.type = "recorder";
  d.kind = TreatmentKind::kFault;
  d.target = TargetKind::kEdge;
  d.make_perturber = [calls, outside](const ParamMap&) -> Perturber {
    return [calls, outside](const CallContext& ctx, Rng&) {
      ++*calls;
      if (ctx.time_us < ctx.window_start_us || ctx.time_us >= ctx.window_end_us) ++*outside;
      return CallPerturbation{};
    };
  };
  TreatmentRegistry reg = TreatmentRegistry::WithBuiltins();
  reg.Register(d);
  LoadedPlan lp = testing::DemoPlan();
  lp.plan.treatments[0] = {"rec", "recorder", Target::Edge("frontend", "recommendation"), TimeWindow{100, 130}, {}};
  lp.plan.treatments.push_back({"rec2", "recorder", Target::Edge("recommendation", "product-catalog"), TimeWindow{300, 301}, {}});
  ASSERT_TRUE(ValidatePlan(lp.plan, lp.topology, reg).empty());
  SimulateRun(lp.plan, lp.topology, lp.plan.variants[0], 5, reg);
  EXPECT_GT(calls->load(), 100);
  EXPECT_EQ(outside->load(), 0);
}

TEST(ExtensionTest, BuiltinSymmetry) {
  // Same semantics as network_delay, written independently against the
  // public interface.
  TreatmentDescriptor d;
  d.type = "custom_delay";
  d.kind = TreatmentKind::kFault;
  d.target = TargetKind::kEdge;
  for (const char* name : {"lo", "hi"}) {
    ParamSpec p;
    p.name = name;
    p.required = true;
    d.params.push_back(p);
  }
  d.make_perturber = [](const ParamMap& p) -> Perturber {
    double lo = *GetNumber(p, "lo");
    double hi = *GetNumber(p, "hi");
    return [lo, hi](const CallContext&, Rng& rng) {
      CallPerturbation out;
      out.added_delay_us = std::llround(rng.Uniform(lo, hi) * 1000.0);
      return out;
    };
  };
  TreatmentRegistry reg = TreatmentRegistry::WithBuiltins();
  reg.Register(d);

  LoadedPlan native = testing::DemoPlan();
  LoadedPlan ext = native;
  ext.plan.treatments[0].type = "custom_delay";
  ext.plan.treatments[0].params = {{"lo", 0.0}, {"hi", 90.0}};
  ASSERT_TRUE(ValidatePlan(ext.plan, ext.topology, reg).empty());
  for (const auto& v : native.plan.variants) {
    RunResult a = SimulateRun(native.plan, native.topology, v, 9, reg);
    RunResult b = SimulateRun(ext.plan, ext.topology, v, 9, reg);
    for (auto& e : b.events) e.type = "network_delay";
    EXPECT_EQ(a, b) << v.name;
  }
}

}  // namespace
}  // namespace oxlab
