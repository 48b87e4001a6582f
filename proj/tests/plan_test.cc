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

#include <set>

#include "oxlab/plan.h"
#include "oxlab/sue.h"
#include "test_util.h"

namespace oxlab {
namespace {

using testing::Codes;

const char* kMinimal = R"(version: 1
id: minimal
topology:
  entry: svc
  services:
    - {name: svc, latency_ms: 10}
phases: {duration_s: 60}
)";

ConfigError ParseError(const std::string& text) {
  try {
    ParsePlan(text);
  } catch (const ConfigError& e) {
    return e;
  }
  ADD_FAILURE() << "expected a parse error";
  return ConfigError("", "", "");
}

TEST(ParsePlanTest, DefaultsApplied) {
  ExperimentPlan p = ParsePlan(kMinimal);
  EXPECT_EQ(p.id, "minimal");
  EXPECT_TRUE(p.treatments.empty());
  EXPECT_EQ(p.repetitions, 1);
  EXPECT_EQ(p.base_seed, 0u);
  EXPECT_EQ(p.phases.duration_s, 60);
  ASSERT_TRUE(std::holds_alternative<Topology>(p.topology));
  EXPECT_EQ(p.EffectiveVariants().size(), 1u);
  EXPECT_EQ(p.BaselineName(), "default");
  EXPECT_DOUBLE_EQ(p.analysis.alpha, 0.01);
  EXPECT_DOUBLE_EQ(p.analysis.beta, 0.6);
  EXPECT_EQ(p.analysis.bin_width_s, 10);
  Topology t = std::get<Topology>(p.topology);
  EXPECT_TRUE(ValidatePlan(p, t).empty());
}

TEST(ParsePlanTest, DemoPlan) {
  LoadedPlan lp = testing::DemoPlan();
  const ExperimentPlan& p = lp.plan;
  EXPECT_EQ(p.phases.duration_s, 600);
  EXPECT_EQ(p.phases.ramp_up_s, 240);
  EXPECT_EQ(p.phases.cool_down_s, 240);
  ASSERT_TRUE(p.phases.fault_window);
  EXPECT_EQ(*p.phases.fault_window, (TimeWindow{240, 360}));
  ASSERT_EQ(p.variants.size(), 3u);
  EXPECT_EQ(p.variants[0].overrides.at("trace_sampling_rate"), ParamValue(0.01));
  EXPECT_EQ(p.variants[1].overrides.at("trace_sampling_rate"), ParamValue(0.05));
  EXPECT_EQ(p.variants[2].overrides.at("trace_sampling_rate"), ParamValue(0.10));
  EXPECT_EQ(std::get<ConstantLoad>(p.workload.profile).users, 50);
  const TreatmentSpec& delay = p.treatments.front();
  EXPECT_EQ(delay.type, "network_delay");
  EXPECT_EQ(delay.target, Target::Edge("frontend", "recommendation"));
  EXPECT_EQ(delay.params.at("min_ms"), ParamValue(0.0));
  EXPECT_EQ(delay.params.at("max_ms"), ParamValue(90.0));
  EXPECT_TRUE(ValidatePlan(p, lp.topology).empty()) << FormatViolations(ValidatePlan(p, lp.topology));
}

TEST(ParsePlanTest, DuplicateVariant) {
  std::string text = std::string(kMinimal) + "variants:\n  - {name: a}\n  - {name: a}\n";
  ConfigError e = ParseError(text);
  EXPECT_EQ(e.code(), "DuplicateVariant");
  EXPECT_NE(std::string(e.what()).find("duplicate variant"), std::string::npos);
}

TEST(ParsePlanTest, SyntaxErrorHasPosition) {
  ConfigError e = ParseError("version: 1\nid: x\nphases: {duration_s: 60\n");
  EXPECT_EQ(e.code(), "Syntax");
  EXPECT_GT(e.line(), 0);
  EXPECT_GT(e.column(), 0);
}

TEST(ParsePlanTest, UnknownFieldRejected) {
  ConfigError e = ParseError(std::string(kMinimal) + "sampling: 0.1\n");
  EXPECT_EQ(e.code(), "UnknownField");
  EXPECT_EQ(e.path(), "sampling");

  ConfigError nested = ParseError(R"(version: 1
id: x
topology: t.yaml
phases: {duration_s: 60, ramp: 5}
)");
  EXPECT_EQ(nested.code(), "UnknownField");
  EXPECT_EQ(nested.path(), "phases.ramp");
}

TEST(ParsePlanTest, TypeMismatch) {
  ConfigError e = ParseError("version: 1\nid: x\ntopology: t.yaml\nphases: {duration_s: ten}\n");
  EXPECT_EQ(e.code(), "TypeMismatch");
  EXPECT_EQ(e.path(), "phases.duration_s");
  ConfigError q = ParseError("version: 1\nid: x\ntopology: t.yaml\nphases: {duration_s: \"60\"}\n");
  EXPECT_EQ(q.code(), "TypeMismatch");
}

TEST(ParsePlanTest, VersionRequired) {
  EXPECT_EQ(ParseError("id: x\ntopology: t.yaml\nphases: {duration_s: 60}\n").code(), "MissingField");
  EXPECT_EQ(ParseError("version: 2\nid: x\ntopology: t.yaml\nphases: {duration_s: 60}\n").code(),
            "UnsupportedVersion");
}

TEST(ParsePlanTest, RoundTrip) {
  for (const std::string& text : {std::string(kMinimal), testing::Slurp(testing::SourcePath("demo/delay-experiment.yaml")),
                                  testing::Slurp(testing::SourcePath("tests/data/full-plan.yaml"))}) {
    ExperimentPlan p = ParsePlan(text);
    std::string again = SerializePlan(p);
    EXPECT_EQ(ParsePlan(again), p) << again;
    EXPECT_EQ(SerializePlan(ParsePlan(again)), again);
  }
}

TEST(ParsePlanTest, Pure) { EXPECT_EQ(ParsePlan(kMinimal), ParsePlan(kMinimal)); }

class ValidatePlanTest : public ::testing::Test {
 protected:
  void SetUp() override {
    loaded_ = testing::DemoPlan();
  }
  std::set<std::string> Check() { return Codes(ValidatePlan(loaded_.plan, loaded_.topology)); }
  LoadedPlan loaded_;
};

TEST_F(ValidatePlanTest, UnknownEdge) {
  loaded_.plan.treatments[0].target = Target::Parse("frontend→nonexistent", TargetKind::kService);
  EXPECT_EQ(Check(), std::set<std::string>{"UnknownTarget"});
}

TEST_F(ValidatePlanTest, WindowOutOfRange) {
  loaded_.plan.phases.ramp_up_s = 0;
  loaded_.plan.phases.cool_down_s = 0;
  loaded_.plan.phases.fault_window = TimeWindow{500, 700};
  EXPECT_EQ(Check(), std::set<std::string>{"WindowOutOfRange"});
}

TEST_F(ValidatePlanTest, EmptyWindow) {
  loaded_.plan.phases.fault_window = TimeWindow{300, 300};
  EXPECT_TRUE(Check().contains("InvalidWindow"));
}

TEST_F(ValidatePlanTest, PhasesMustLeaveSteadyState) {
  loaded_.plan.phases.ramp_up_s = 400;
  EXPECT_TRUE(Check().contains("InvalidPhases"));
  loaded_.plan.phases.ramp_up_s = -1;
  EXPECT_TRUE(Check().contains("InvalidPhases"));
}

TEST_F(ValidatePlanTest, UnknownTreatment) {
  loaded_.plan.treatments[0].type = "tc_netem";
  EXPECT_EQ(Check(), std::set<std::string>{"UnknownTreatment"});
}

TEST_F(ValidatePlanTest, ParameterSchema) {
  loaded_.plan.treatments[0].params["min_ms"] = 100.0;  // > max_ms
  EXPECT_FALSE(Check().empty());
  loaded_ = testing::DemoPlan();
  loaded_.plan.treatments[0].params["jitter"] = 1.0;
  EXPECT_TRUE(Check().contains("UnknownParameter"));
  loaded_ = testing::DemoPlan();
  loaded_.plan.treatments[0].params["max_ms"] = std::string("ninety");
  EXPECT_TRUE(Check().contains("InvalidParameter"));
}

TEST_F(ValidatePlanTest, VariantOverrides) {
  loaded_.plan.variants[1].overrides["trace_sampling_rate"] = 1.5;
  EXPECT_TRUE(Check().contains("InvalidOverride"));
  loaded_ = testing::DemoPlan();
  loaded_.plan.variants[1].overrides["min_ms"] = 5.0;  // faults cannot be overridden
  EXPECT_TRUE(Check().contains("UnknownOverride"));
}

TEST_F(ValidatePlanTest, RepetitionsAndBaseline) {
  loaded_.plan.repetitions = 0;
  loaded_.plan.baseline = "C";
  auto codes = Check();
  EXPECT_TRUE(codes.contains("InvalidRepetitions"));
  EXPECT_TRUE(codes.contains("UnknownBaseline"));
}

TEST_F(ValidatePlanTest, ResponseSources) {
  loaded_.plan.response_variables.push_back({"x", {ResponseSource::Kind::kMetricSeries, "nope.cpu_seconds"}, 0});
  EXPECT_TRUE(Check().contains("UnknownResponseSource"));
}

TEST_F(ValidatePlanTest, FaultNeedsWindow) {
  loaded_.plan.phases.fault_window.reset();
  EXPECT_TRUE(Check().contains("MissingWindow"));
}

TEST_F(ValidatePlanTest, InstrumentationHasNoWindow) {
  loaded_.plan.treatments[1].window = TimeWindow{0, 10};
  EXPECT_TRUE(Check().contains("UnexpectedWindow"));
}

TEST_F(ValidatePlanTest, ValidPlansExecute) {
  for (const auto& v : loaded_.plan.EffectiveVariants()) {
    EXPECT_NO_THROW(SimulateRun(loaded_.plan, loaded_.topology, v, 1));
  }
}

TEST(LoadPlanTest, MissingTopologyNamesPath) {
  testing::TempDir dir;
  testing::Spit(dir / "plan.yaml", "version: 1\nid: x\ntopology: missing-topo.yaml\nphases: {duration_s: 60}\n");
  try {
    LoadPlanFile(dir / "plan.yaml");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("missing-topo.yaml"), std::string::npos) << e.what();
  }
}

TEST(FaultWindowTest, PhaseWindowFirst) {
  LoadedPlan lp = testing::DemoPlan();
  EXPECT_EQ(*FaultWindow(lp.plan), (TimeWindow{240, 360}));
  lp.plan.phases.fault_window.reset();
  lp.plan.treatments[0].window = TimeWindow{100, 200};
  EXPECT_EQ(*FaultWindow(lp.plan), (TimeWindow{100, 200}));
  lp.plan.treatments.clear();
  EXPECT_FALSE(FaultWindow(lp.plan));
}

}  // namespace
}  // namespace oxlab
