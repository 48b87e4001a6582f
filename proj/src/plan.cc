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

#include "oxlab/plan.h"

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "plan_io.h"
#include "yaml_util.h"

namespace oxlab {

std::vector<VariantSpec> ExperimentPlan::EffectiveVariants() const {
  if (!variants.empty()) return variants;
  return {VariantSpec{"default", {}}};
}

std::string ExperimentPlan::BaselineName() const {
  if (!baseline.empty()) return baseline;
  return EffectiveVariants().front().name;
}

std::optional<TimeWindow> ExperimentPlan::WindowOf(const TreatmentSpec& t) const {
  if (t.window) return t.window;
  return phases.fault_window;
}

std::optional<TimeWindow> FaultWindow(const ExperimentPlan& plan, const TreatmentRegistry& registry) {
  if (plan.phases.fault_window) return plan.phases.fault_window;
  for (const auto& t : plan.treatments) {
    const TreatmentDescriptor* d = registry.Find(t.type);
    if (d && d->kind == TreatmentKind::kFault && t.window) return t.window;
  }
  return std::nullopt;
}

std::vector<std::string> MetricSeriesNames(const Topology& topology) {
  std::vector<std::string> out;
  for (const auto& s : topology.services) {
    for (const char* m : {"cpu_seconds", "error_rate", "in_flight", "latency_ms", "request_rate"}) {
      out.push_back(s.name + "." + m);
    }
  }
  return out;
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("Io", path, "cannot read file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace plan_io {

TimeWindow ReadWindow(const YAML::Node& node, const std::string& path) {
  yaml::ExpectSeq(node, path);
  if (node.size() != 2) yaml::Fail("TypeMismatch", path, "window must be [start_s, end_s]", node);
  return {yaml::As<int64_t>(node[0], yaml::Index(path, 0)),
          yaml::As<int64_t>(node[1], yaml::Index(path, 1))};
}

void EmitWindow(YAML::Emitter& out, const TimeWindow& w) {
  out << YAML::Flow << YAML::BeginSeq << w.start_s << w.end_s << YAML::EndSeq;
}

LoadProfile ReadProfile(const YAML::Node& node, const std::string& path) {
  yaml::ExpectMap(node, path);
  if (node.size() != 1) {
    yaml::Fail("TypeMismatch", path, "profile must have exactly one of constant, ramp, spike", node);
  }
  auto kv = *node.begin();
  std::string kind = yaml::As<std::string>(kv.first, path);
  yaml::MapReader r(kv.second, yaml::Join(path, kind));
  LoadProfile out;
  if (kind == "constant") {
    out = ConstantLoad{r.Get<int64_t>("users")};
  } else if (kind == "ramp") {
    out = RampLoad{r.Get<int64_t>("from"), r.Get<int64_t>("to")};
  } else if (kind == "spike") {
    SpikeLoad s;
    s.base = r.Get<int64_t>("base");
    s.peak = r.Get<int64_t>("peak");
    TimeWindow w = ReadWindow(r.Required("window_s"), r.Path("window_s"));
    s.start_s = w.start_s;
    s.end_s = w.end_s;
    out = s;
  } else {
    yaml::Fail("UnknownField", yaml::Join(path, kind), "unknown load profile '" + kind + "'",
               kv.first);
  }
  r.Finish();
  return out;
}

void EmitProfile(YAML::Emitter& out, const LoadProfile& profile) {
  out << YAML::Flow << YAML::BeginMap;
  if (const auto* c = std::get_if<ConstantLoad>(&profile)) {
    out << YAML::Key << "constant" << YAML::Value << YAML::BeginMap << YAML::Key << "users"
        << YAML::Value << c->users << YAML::EndMap;
  } else if (const auto* r = std::get_if<RampLoad>(&profile)) {
    out << YAML::Key << "ramp" << YAML::Value << YAML::BeginMap << YAML::Key << "from"
        << YAML::Value << r->from << YAML::Key << "to" << YAML::Value << r->to << YAML::EndMap;
  } else {
    const auto& s = std::get<SpikeLoad>(profile);
    out << YAML::Key << "spike" << YAML::Value << YAML::BeginMap << YAML::Key << "base"
        << YAML::Value << s.base << YAML::Key << "peak" << YAML::Value << s.peak << YAML::Key
        << "window_s" << YAML::Value;
    EmitWindow(out, {s.start_s, s.end_s});
    out << YAML::EndMap;
  }
  out << YAML::EndMap;
}

WorkloadSpec ReadWorkload(const YAML::Node& node, const std::string& path) {
  yaml::MapReader r(node, path);
  WorkloadSpec w;
  w.profile = ReadProfile(r.Required("profile"), r.Path("profile"));
  if (YAML::Node think = r.Optional("think_time_ms")) {
    w.think_time = yaml_io::ReadDistribution(think, r.Path("think_time_ms"));
  }
  r.Finish();
  return w;
}

PhaseSchedule ReadPhases(const YAML::Node& node, const std::string& path) {
  yaml::MapReader r(node, path);
  PhaseSchedule p;
  p.duration_s = r.Get<int64_t>("duration_s");
  p.ramp_up_s = r.GetOr<int64_t>("ramp_up_s", 0);
  p.cool_down_s = r.GetOr<int64_t>("cool_down_s", 0);
  if (YAML::Node w = r.Optional("fault_window_s")) p.fault_window = ReadWindow(w, r.Path("fault_window_s"));
  r.Finish();
  return p;
}

TreatmentSpec ReadTreatment(const YAML::Node& node, const std::string& path) {
  yaml::MapReader r(node, path);
  TreatmentSpec t;
  t.name = r.Get<std::string>("name");
  t.type = r.Get<std::string>("type");
  t.target = Target::Parse(r.GetOr<std::string>("target", ""), TargetKind::kService);
  if (YAML::Node w = r.Optional("window_s")) t.window = ReadWindow(w, r.Path("window_s"));
  t.params = yaml::AsParamMap(r.Optional("params"), r.Path("params"));
  r.Finish();
  return t;
}

ResponseVariableSpec ReadResponse(const YAML::Node& node, const std::string& path) {
  yaml::MapReader r(node, path);
  ResponseVariableSpec v;
  v.name = r.Get<std::string>("name");
  {
    yaml::MapReader s(r.Required("source"), r.Path("source"));
    bool trace = s.Has("trace_duration");
    bool metric = s.Has("metric");
    if (trace == metric) {
      yaml::Fail("TypeMismatch", s.path(), "source must be one of trace_duration, metric", s.node());
    }
    if (trace) {
      v.source = {ResponseSource::Kind::kTraceDuration, s.Get<std::string>("trace_duration")};
    } else {
      v.source = {ResponseSource::Kind::kMetricSeries, s.Get<std::string>("metric")};
    }
    s.Finish();
  }
  v.window_s = r.GetOr<int64_t>("window_s", 0);
  r.Finish();
  return v;
}

AnalysisConfig ReadAnalysis(const YAML::Node& node, const std::string& path) {
  yaml::MapReader r(node, path);
  AnalysisConfig a;
  a.alpha = r.GetOr<double>("alpha", a.alpha);
  a.beta = r.GetOr<double>("beta", a.beta);
  a.bin_width_s = r.GetOr<int64_t>("bin_width_s", a.bin_width_s);
  a.budget_pressure = r.GetOr<double>("budget_pressure", a.budget_pressure);
  r.Finish();
  return a;
}

void EmitParamMap(YAML::Emitter& out, const ParamMap& params) {
  out << YAML::Flow << YAML::BeginMap;
  for (const auto& [k, v] : params) {
    out << YAML::Key << k << YAML::Value;
    yaml::EmitParam(out, v);
  }
  out << YAML::EndMap;
}

}  // namespace plan_io

using namespace plan_io;

ExperimentPlan ParsePlan(const std::string& text) {
  YAML::Node root = yaml::Parse(text, "plan");
  if (!root.IsMap()) yaml::Fail("TypeMismatch", "", "plan must be a mapping", root);
  yaml::MapReader r(root, "");
  int64_t version = r.Get<int64_t>("version");
  if (version != kPlanVersion) {
    yaml::Fail("UnsupportedVersion", "version", fmt::format("unsupported plan version {}", version),
               root["version"]);
  }

  ExperimentPlan plan;
  plan.id = r.Get<std::string>("id");
  YAML::Node topo = r.Required("topology");
  if (topo.IsScalar()) {
    plan.topology = yaml::As<std::string>(topo, "topology");
  } else {
    plan.topology = yaml_io::ReadTopology(topo, "topology", /*allow_version=*/false);
  }
  if (YAML::Node w = r.Optional("workload")) plan.workload = ReadWorkload(w, "workload");
  plan.phases = ReadPhases(r.Required("phases"), "phases");

  if (YAML::Node ts = r.Optional("treatments")) {
    yaml::ExpectSeq(ts, "treatments");
    for (size_t i = 0; i < ts.size(); ++i) {
      plan.treatments.push_back(ReadTreatment(ts[i], yaml::Index("treatments", i)));
    }
  }
  if (YAML::Node rv = r.Optional("response_variables")) {
    yaml::ExpectSeq(rv, "response_variables");
    for (size_t i = 0; i < rv.size(); ++i) {
      plan.response_variables.push_back(ReadResponse(rv[i], yaml::Index("response_variables", i)));
    }
  }
  if (YAML::Node vs = r.Optional("variants")) {
    yaml::ExpectSeq(vs, "variants");
    std::set<std::string> names;
    for (size_t i = 0; i < vs.size(); ++i) {
      std::string path = yaml::Index("variants", i);
      yaml::MapReader vr(vs[i], path);
      VariantSpec v;
      v.name = vr.Get<std::string>("name");
      v.overrides = yaml::AsParamMap(vr.Optional("overrides"), vr.Path("overrides"));
      vr.Finish();
      if (!names.insert(v.name).second) {
        yaml::Fail("DuplicateVariant", vr.Path("name"), "duplicate variant '" + v.name + "'",
                   vs[i]["name"]);
      }
      plan.variants.push_back(std::move(v));
    }
  }
  plan.baseline = r.GetOr<std::string>("baseline", "");
  plan.repetitions = r.GetOr<int64_t>("repetitions", 1);
  plan.base_seed = r.GetOr<uint64_t>("base_seed", 0);
  if (YAML::Node a = r.Optional("analysis")) plan.analysis = ReadAnalysis(a, "analysis");
  r.Finish();
  return plan;
}

std::string SerializePlan(const ExperimentPlan& plan) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "version" << YAML::Value << kPlanVersion;
  out << YAML::Key << "id" << YAML::Value << YAML::DoubleQuoted << plan.id;
  out << YAML::Key << "topology" << YAML::Value;
  if (const auto* path = std::get_if<std::string>(&plan.topology)) {
    out << YAML::DoubleQuoted << *path;
  } else {
    yaml_io::EmitTopology(out, std::get<Topology>(plan.topology));
  }

  out << YAML::Key << "workload" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "profile" << YAML::Value;
  EmitProfile(out, plan.workload.profile);
  out << YAML::Key << "think_time_ms" << YAML::Value;
  yaml_io::EmitDistribution(out, plan.workload.think_time);
  out << YAML::EndMap;

  out << YAML::Key << "phases" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "duration_s" << YAML::Value << plan.phases.duration_s;
  out << YAML::Key << "ramp_up_s" << YAML::Value << plan.phases.ramp_up_s;
  out << YAML::Key << "cool_down_s" << YAML::Value << plan.phases.cool_down_s;
  if (plan.phases.fault_window) {
    out << YAML::Key << "fault_window_s" << YAML::Value;
    EmitWindow(out, *plan.phases.fault_window);
  }
  out << YAML::EndMap;

  out << YAML::Key << "treatments" << YAML::Value << YAML::BeginSeq;
  for (const auto& t : plan.treatments) {
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << YAML::DoubleQuoted << t.name;
    out << YAML::Key << "type" << YAML::Value << YAML::DoubleQuoted << t.type;
    if (t.target.kind != TargetKind::kGlobal) {
      out << YAML::Key << "target" << YAML::Value << YAML::DoubleQuoted << t.target.ToString();
    }
    if (t.window) {
      out << YAML::Key << "window_s" << YAML::Value;
      EmitWindow(out, *t.window);
    }
    out << YAML::Key << "params" << YAML::Value;
    EmitParamMap(out, t.params);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "response_variables" << YAML::Value << YAML::BeginSeq;
  for (const auto& v : plan.response_variables) {
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << YAML::DoubleQuoted << v.name;
    out << YAML::Key << "source" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key
        << (v.source.kind == ResponseSource::Kind::kTraceDuration ? "trace_duration" : "metric")
        << YAML::Value << YAML::DoubleQuoted << v.source.ref << YAML::EndMap;
    out << YAML::Key << "window_s" << YAML::Value << v.window_s;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "variants" << YAML::Value << YAML::BeginSeq;
  for (const auto& v : plan.variants) {
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << YAML::DoubleQuoted << v.name;
    out << YAML::Key << "overrides" << YAML::Value;
    EmitParamMap(out, v.overrides);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  if (!plan.baseline.empty()) {
    out << YAML::Key << "baseline" << YAML::Value << YAML::DoubleQuoted << plan.baseline;
  }
  out << YAML::Key << "repetitions" << YAML::Value << plan.repetitions;
  out << YAML::Key << "base_seed" << YAML::Value << plan.base_seed;
  out << YAML::Key << "analysis" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "alpha" << YAML::Value << yaml::FormatDouble(plan.analysis.alpha);
  out << YAML::Key << "beta" << YAML::Value << yaml::FormatDouble(plan.analysis.beta);
  out << YAML::Key << "bin_width_s" << YAML::Value << plan.analysis.bin_width_s;
  out << YAML::Key << "budget_pressure" << YAML::Value
      << yaml::FormatDouble(plan.analysis.budget_pressure);
  out << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

namespace {

class PlanValidator {
 public:
  PlanValidator(const ExperimentPlan& plan, const Topology& topology,
                const TreatmentRegistry& registry)
      : plan_(plan), topology_(topology), registry_(registry) {
    for (auto& name : MetricSeriesNames(topology)) metric_names_.insert(name);
    for (const auto& v : plan.response_variables) metric_names_.insert(v.name);
  }

  std::vector<Violation> Run() {
    for (auto& v : ValidateTopology(topology_)) out_.push_back(std::move(v));
    Phases();
    Workload();
    Treatments();
    Responses();
    Variants();
    if (plan_.repetitions < 1) add("InvalidRepetitions", "repetitions", "repetitions must be >= 1");
    Analysis();
    if (out_.empty()) Compile();
    return std::move(out_);
  }

 private:
  void add(std::string code, std::string path, std::string message) {
    out_.push_back({std::move(code), std::move(path), std::move(message)});
  }

  bool InRange(const TimeWindow& w) const {
    return w.start_s >= 0 && w.end_s <= plan_.phases.duration_s;
  }

  void Phases() {
    const auto& p = plan_.phases;
    if (p.duration_s <= 0) add("InvalidPhases", "phases.duration_s", "duration must be > 0");
    if (p.ramp_up_s < 0) add("InvalidPhases", "phases.ramp_up_s", "ramp-up must be >= 0");
    if (p.cool_down_s < 0) add("InvalidPhases", "phases.cool_down_s", "cool-down must be >= 0");
    if (p.duration_s > 0 && p.steady_s() <= 0) {
      add("InvalidPhases", "phases", "ramp-up plus cool-down leaves no steady phase");
    }
    if (p.fault_window) {
      if (p.fault_window->end_s <= p.fault_window->start_s) {
        add("InvalidWindow", "phases.fault_window_s", "fault window is empty");
      } else if (!InRange(*p.fault_window)) {
        add("WindowOutOfRange", "phases.fault_window_s",
            fmt::format("[{}, {}) is outside [0, {}]", p.fault_window->start_s,
                        p.fault_window->end_s, p.duration_s));
      }
    }
  }

  void Workload() {
    if (auto msg = CheckWorkload(plan_.workload); !msg.empty()) {
      add("InvalidWorkload", "workload", msg);
    }
    if (const auto* s = std::get_if<SpikeLoad>(&plan_.workload.profile)) {
      if (!InRange({s->start_s, s->end_s})) {
        add("WindowOutOfRange", "workload.profile.spike.window_s", "spike window outside the run");
      }
    }
  }

  bool TargetExists(const Target& target) const {
    switch (target.kind) {
      case TargetKind::kGlobal:
        return true;
      case TargetKind::kService:
        return topology_.Find(target.service) != nullptr;
      case TargetKind::kEdge:
        return topology_.HasEdge(target.service, target.callee);
      case TargetKind::kMetric:
        return metric_names_.contains(target.service);
    }
    return false;
  }

  void CheckTarget(const TreatmentDescriptor& d, const Target& written, const std::string& path) {
    Target target = Target::Parse(written.ToString(), d.target);
    if (d.target == TargetKind::kGlobal && target.kind != TargetKind::kGlobal) {
      add("InvalidTarget", path, "'" + d.type + "' takes no target");
      return;
    }
    if (target.kind != d.target) {
      add("InvalidTarget", path,
          fmt::format("'{}' needs a {} target", d.type, TargetKindName(d.target)));
      return;
    }
    if (!TargetExists(target)) {
      add("UnknownTarget", path,
          fmt::format("{} '{}' is not in the topology", TargetKindName(target.kind),
                      target.ToString()));
    }
  }

  void Treatments() {
    std::set<std::string> names;
    std::set<std::pair<std::string, Target>> instruments;
    for (size_t i = 0; i < plan_.treatments.size(); ++i) {
      const auto& t = plan_.treatments[i];
      std::string path = yaml::Index("treatments", i);
      if (t.name.empty()) add("InvalidTreatment", path + ".name", "treatment name is empty");
      if (!names.insert(t.name).second) {
        add("DuplicateTreatmentName", path + ".name", "duplicate treatment name '" + t.name + "'");
      }
      const TreatmentDescriptor* d = registry_.Find(t.type);
      if (d == nullptr) {
        add("UnknownTreatment", path + ".type", "treatment type '" + t.type + "' is not registered");
        continue;
      }
      CheckTarget(*d, t.target, path + ".target");
      if (d->kind == TreatmentKind::kFault) {
        if (t.window) {
          if (t.window->end_s <= t.window->start_s) {
            add("InvalidWindow", path + ".window_s", "window is empty");
          } else if (!InRange(*t.window)) {
            add("WindowOutOfRange", path + ".window_s",
                fmt::format("[{}, {}) is outside [0, {}]", t.window->start_s, t.window->end_s,
                            plan_.phases.duration_s));
          }
        } else if (!plan_.phases.fault_window) {
          add("MissingWindow", path + ".window_s",
              "fault treatment has no window and the plan has no phases.fault_window_s");
        }
      } else {
        if (t.window) {
          add("UnexpectedWindow", path + ".window_s",
              "instrumentation treatments apply to the whole run");
        }
        Target target = Target::Parse(t.target.ToString(), d->target);
        if (!instruments.insert({t.type, target}).second) {
          add("ConflictingInstrumentation", path,
              fmt::format("second '{}' treatment on target '{}'", t.type, target.ToString()));
        }
      }
      for (auto& v : ValidateParams(*d, t.params, path + ".params")) out_.push_back(std::move(v));
    }
  }

  void Responses() {
    std::set<std::string> names;
    for (size_t i = 0; i < plan_.response_variables.size(); ++i) {
      const auto& v = plan_.response_variables[i];
      std::string path = yaml::Index("response_variables", i);
      if (!names.insert(v.name).second) {
        add("DuplicateResponse", path + ".name", "duplicate response variable '" + v.name + "'");
      }
      if (v.source.kind == ResponseSource::Kind::kTraceDuration) {
        if (!topology_.Find(v.source.ref)) {
          add("UnknownResponseSource", path + ".source",
              "service '" + v.source.ref + "' is not in the topology");
        }
      } else if (!MetricSeriesNamesContain(v.source.ref)) {
        add("UnknownResponseSource", path + ".source",
            "metric series '" + v.source.ref + "' is not emitted");
      }
      if (v.window_s < 0) add("InvalidResponse", path + ".window_s", "window must be >= 0");
    }
  }

  bool MetricSeriesNamesContain(const std::string& name) const {
    auto names = MetricSeriesNames(topology_);
    return std::find(names.begin(), names.end(), name) != names.end();
  }

  void Variants() {
    std::set<std::string> names;
    for (size_t i = 0; i < plan_.variants.size(); ++i) {
      const auto& v = plan_.variants[i];
      std::string path = yaml::Index("variants", i);
      if (v.name.empty()) add("InvalidVariant", path + ".name", "variant name is empty");
      if (!names.insert(v.name).second) {
        add("DuplicateVariant", path + ".name", "duplicate variant '" + v.name + "'");
      }
      for (const auto& [key, value] : v.overrides) {
        std::string kp = path + ".overrides." + key;
        auto [alias, target_text] = SplitOverrideKey(key);
        auto resolved = registry_.ResolveOverride(alias);
        if (!resolved) {
          add("UnknownOverride", kp, "no instrumentation parameter named '" + alias + "'");
          continue;
        }
        const TreatmentDescriptor& d = *resolved->descriptor;
        if (target_text) CheckTarget(d, Target::Parse(*target_text, d.target), kp);
        ParamMap single{{resolved->param, value}};
        for (auto& viol : ValidateParams(d, single, kp)) {
          if (viol.code == "MissingParameter") continue;
          viol.code = "InvalidOverride";
          viol.path = kp;
          out_.push_back(std::move(viol));
        }
      }
    }
    if (!plan_.baseline.empty() && !names.contains(plan_.baseline)) {
      add("UnknownBaseline", "baseline", "baseline '" + plan_.baseline + "' is not a variant");
    }
  }

  void Analysis() {
    const auto& a = plan_.analysis;
    if (!(a.alpha > 0 && a.alpha < 1)) add("InvalidAnalysis", "analysis.alpha", "alpha must be in (0, 1)");
    if (!(a.beta >= 0 && a.beta <= 1)) add("InvalidAnalysis", "analysis.beta", "beta must be in [0, 1]");
    if (a.bin_width_s <= 0) add("InvalidAnalysis", "analysis.bin_width_s", "bin width must be > 0");
    if (!(a.budget_pressure >= 0 && a.budget_pressure <= 1)) {
      add("InvalidAnalysis", "analysis.budget_pressure", "budget pressure must be in [0, 1]");
    }
  }

  // Everything above passed; make sure every variant actually compiles.
  void Compile() {
    for (const auto& v : plan_.EffectiveVariants()) {
      try {
        CompileTreatments(plan_, v, registry_);
      } catch (const ConfigError& e) {
        add(e.code(), "variants." + v.name, e.what());
      }
    }
  }

  const ExperimentPlan& plan_;
  const Topology& topology_;
  const TreatmentRegistry& registry_;
  std::set<std::string> metric_names_;
  std::vector<Violation> out_;
};

}  // namespace

std::vector<Violation> ValidatePlan(const ExperimentPlan& plan, const Topology& topology,
                                    const TreatmentRegistry& registry) {
  return PlanValidator(plan, topology, registry).Run();
}

Topology ResolveTopology(const ExperimentPlan& plan, const std::string& base_dir) {
  if (const auto* inline_topology = std::get_if<Topology>(&plan.topology)) return *inline_topology;
  std::filesystem::path p(std::get<std::string>(plan.topology));
  if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
  return LoadTopologyFile(p.string());
}

LoadedPlan LoadPlanFile(const std::string& path) {
  LoadedPlan out;
  out.plan_path = path;
  out.plan = ParsePlan(ReadTextFile(path));
  out.topology = ResolveTopology(out.plan, std::filesystem::path(path).parent_path().string());
  return out;
}

}  // namespace oxlab
