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

#include "oxlab/treatments.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

#include "oxlab/plan.h"

namespace oxlab {

std::string_view TreatmentKindName(TreatmentKind kind) {
  return kind == TreatmentKind::kFault ? "fault" : "instrumentation";
}

std::string_view TargetKindName(TargetKind kind) {
  switch (kind) {
    case TargetKind::kGlobal:
      return "global";
    case TargetKind::kService:
      return "service";
    case TargetKind::kEdge:
      return "edge";
    case TargetKind::kMetric:
      return "metric";
  }
  return "?";
}

Target Target::Parse(std::string_view text, TargetKind hint) {
  if (text.empty() || text == "global") return Global();
  for (std::string_view arrow : {std::string_view("->"), std::string_view("\xE2\x86\x92")}) {
    if (auto pos = text.find(arrow); pos != std::string_view::npos) {
      return Edge(std::string(text.substr(0, pos)), std::string(text.substr(pos + arrow.size())));
    }
  }
  if (hint == TargetKind::kMetric) return Metric(std::string(text));
  if (hint == TargetKind::kEdge) return Edge(std::string(text), {});
  return Service(std::string(text));
}

std::string Target::ToString() const {
  switch (kind) {
    case TargetKind::kGlobal:
      return "global";
    case TargetKind::kEdge:
      return service + "->" + callee;
    default:
      return service;
  }
}

void CallPerturbation::Merge(const CallPerturbation& other) {
  added_delay_us += other.added_delay_us;
  drop = drop || other.drop;
  kill = kill || other.kill;
  if (other.defer_until_us) {
    defer_until_us = std::max(defer_until_us.value_or(*other.defer_until_us), *other.defer_until_us);
  }
  latency_factor *= other.latency_factor;
}

void TreatmentRegistry::Register(TreatmentDescriptor descriptor) {
  if (descriptor.type.empty()) {
    throw ConfigError("InvalidTreatment", "", "treatment type name is empty");
  }
  if (by_type_.contains(descriptor.type)) {
    throw ConfigError("DuplicateTreatment", descriptor.type,
                      "treatment '" + descriptor.type + "' is already registered");
  }
  if (descriptor.kind == TreatmentKind::kFault && !descriptor.make_perturber) {
    throw ConfigError("InvalidTreatment", descriptor.type, "fault treatment needs make_perturber");
  }
  if (descriptor.kind == TreatmentKind::kInstrumentation && !descriptor.configure) {
    throw ConfigError("InvalidTreatment", descriptor.type,
                      "instrumentation treatment needs configure");
  }
  for (const auto& [alias, param] : descriptor.override_keys) {
    if (ResolveOverride(alias)) {
      throw ConfigError("DuplicateTreatment", alias,
                        "override key '" + alias + "' is already registered");
    }
  }
  auto type = descriptor.type;
  by_type_.emplace(std::move(type),
                   std::make_shared<const TreatmentDescriptor>(std::move(descriptor)));
}

const TreatmentDescriptor* TreatmentRegistry::Find(std::string_view type) const {
  auto it = by_type_.find(type);
  return it == by_type_.end() ? nullptr : it->second.get();
}

std::vector<std::string> TreatmentRegistry::Types() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : by_type_) out.push_back(k);
  return out;
}

std::optional<TreatmentRegistry::OverrideTarget> TreatmentRegistry::ResolveOverride(
    std::string_view alias) const {
  for (const auto& [type, d] : by_type_) {
    if (d->kind != TreatmentKind::kInstrumentation) continue;
    auto it = d->override_keys.find(std::string(alias));
    if (it != d->override_keys.end()) return OverrideTarget{d.get(), it->second};
  }
  return std::nullopt;
}

TreatmentRegistry TreatmentRegistry::WithBuiltins() {
  TreatmentRegistry r;
  RegisterBuiltinTreatments(r);
  return r;
}

TreatmentRegistry& TreatmentRegistry::Default() {
  static TreatmentRegistry registry = WithBuiltins();
  return registry;
}

namespace {

ParamSpec Number(std::string name, bool required, std::optional<double> fallback,
                 std::optional<double> min, std::optional<double> max, std::string doc) {
  ParamSpec p;
  p.name = std::move(name);
  p.type = ParamType::kNumber;
  p.required = required;
  if (fallback) p.fallback = *fallback;
  p.min = min;
  p.max = max;
  p.doc = std::move(doc);
  return p;
}

TreatmentDescriptor NetworkDelay() {
  TreatmentDescriptor d;
  d.type = "network_delay";
  d.kind = TreatmentKind::kFault;
  d.target = TargetKind::kEdge;
  d.doc = "Adds latency to every call across an edge while active.";
  d.params.push_back(Number("min_ms", true, std::nullopt, 0.0, std::nullopt, "lower delay bound"));
  d.params.push_back(Number("max_ms", true, std::nullopt, 0.0, std::nullopt, "upper delay bound"));
  ParamSpec dist;
  dist.name = "distribution";
  dist.type = ParamType::kString;
  dist.fallback = std::string("uniform");
  dist.doc = "uniform: fresh draw in [min_ms, max_ms] per call; constant: max_ms on every call";
  d.params.push_back(dist);
  d.check = [](const ParamMap& p) {
    std::vector<std::string> out;
    if (NumberOr(p, "min_ms", 0) > NumberOr(p, "max_ms", 0)) out.push_back("min_ms > max_ms");
    auto dist = GetString(p, "distribution").value_or("uniform");
    if (dist != "uniform" && dist != "constant") {
      out.push_back("distribution must be 'uniform' or 'constant'");
    }
    return out;
  };
  d.make_perturber = [](const ParamMap& p) -> Perturber {
    double lo = NumberOr(p, "min_ms", 0);
    double hi = NumberOr(p, "max_ms", 0);
    bool constant = GetString(p, "distribution").value_or("uniform") == "constant";
    return [lo, hi, constant](const CallContext&, Rng& rng) {
      CallPerturbation out;
      double ms = constant ? hi : rng.Uniform(lo, hi);
      out.added_delay_us = std::llround(ms * 1000.0);
      return out;
    };
  };
  return d;
}

TreatmentDescriptor PacketLoss() {
  TreatmentDescriptor d;
  d.type = "packet_loss";
  d.kind = TreatmentKind::kFault;
  d.target = TargetKind::kEdge;
  d.doc = "Drops calls across an edge with the given probability; the caller fails.";
  d.params.push_back(Number("probability", true, std::nullopt, 0.0, 1.0, "drop probability"));
  d.make_perturber = [](const ParamMap& p) -> Perturber {
    double prob = NumberOr(p, "probability", 0);
    return [prob](const CallContext&, Rng& rng) {
      CallPerturbation out;
      out.drop = rng.Bernoulli(prob);
      return out;
    };
  };
  return d;
}

TreatmentDescriptor ServicePause() {
  TreatmentDescriptor d;
  d.type = "service_pause";
  d.kind = TreatmentKind::kFault;
  d.target = TargetKind::kService;
  d.doc = "Calls to the service wait until the window ends, then proceed.";
  d.make_perturber = [](const ParamMap&) -> Perturber {
    return [](const CallContext& ctx, Rng&) {
      CallPerturbation out;
      out.defer_until_us = ctx.window_end_us;
      return out;
    };
  };
  return d;
}

TreatmentDescriptor ServiceKill() {
  TreatmentDescriptor d;
  d.type = "service_kill";
  d.kind = TreatmentKind::kFault;
  d.target = TargetKind::kService;
  d.doc = "Calls to the service fail immediately.";
  d.make_perturber = [](const ParamMap&) -> Perturber {
    return [](const CallContext&, Rng&) {
      CallPerturbation out;
      out.kill = true;
      return out;
    };
  };
  return d;
}

TreatmentDescriptor TraceSampling() {
  TreatmentDescriptor d;
  d.type = "trace_sampling_rate";
  d.kind = TreatmentKind::kInstrumentation;
  d.target = TargetKind::kGlobal;
  d.doc = "Head-based trace sampling probability.";
  d.params.push_back(Number("rate", false, 1.0, 0.0, 1.0, "fraction of traces kept"));
  d.configure = [](const ParamMap& p, const Target&, InstrumentationConfig& cfg) {
    cfg.trace_sampling_rate = NumberOr(p, "rate", 1.0);
  };
  d.override_keys = {{"trace_sampling_rate", "rate"}};
  return d;
}

TreatmentDescriptor ScrapeInterval() {
  TreatmentDescriptor d;
  d.type = "metric_scrape_interval";
  d.kind = TreatmentKind::kInstrumentation;
  d.target = TargetKind::kGlobal;
  d.doc = "Metric scrape cadence in whole seconds.";
  ParamSpec p = Number("seconds", false, 15.0, 0.0, std::nullopt, "scrape interval");
  p.type = ParamType::kInteger;
  p.min_exclusive = true;
  d.params.push_back(p);
  d.configure = [](const ParamMap& p, const Target&, InstrumentationConfig& cfg) {
    cfg.scrape_interval_s = static_cast<int64_t>(NumberOr(p, "seconds", 15));
  };
  d.override_keys = {{"metric_scrape_interval", "seconds"}};
  return d;
}

TreatmentDescriptor AlertThreshold() {
  TreatmentDescriptor d;
  d.type = "alert_threshold";
  d.kind = TreatmentKind::kInstrumentation;
  d.target = TargetKind::kMetric;
  d.doc =
      "Fires when the target series (a metric series or a response variable) exceeds "
      "the threshold for `consecutive` scrapes in a row.";
  d.params.push_back(Number("threshold", true, std::nullopt, std::nullopt, std::nullopt,
                            "strict upper bound"));
  ParamSpec k = Number("consecutive", false, 1.0, 1.0, std::nullopt, "breaches in a row");
  k.type = ParamType::kInteger;
  d.params.push_back(k);
  d.configure = [](const ParamMap& p, const Target& target, InstrumentationConfig& cfg) {
    cfg.alerts.push_back({target.service, NumberOr(p, "threshold", 0),
                          static_cast<int64_t>(NumberOr(p, "consecutive", 1))});
  };
  d.override_keys = {{"alert_threshold", "threshold"}, {"alert_consecutive", "consecutive"}};
  return d;
}

TreatmentDescriptor InstrumentationPoint() {
  TreatmentDescriptor d;
  d.type = "instrumentation_point";
  d.kind = TreatmentKind::kInstrumentation;
  d.target = TargetKind::kService;
  d.doc = "Turns span emission for one service on or off.";
  ParamSpec p;
  p.name = "enabled";
  p.type = ParamType::kBool;
  p.fallback = true;
  p.doc = "emit spans for this service";
  d.params.push_back(p);
  d.configure = [](const ParamMap& p, const Target& target, InstrumentationConfig& cfg) {
    if (!GetBool(p, "enabled").value_or(true)) cfg.disabled_services.insert(target.service);
  };
  d.override_keys = {{"instrumentation_point", "enabled"}};
  return d;
}

}  // namespace

void RegisterBuiltinTreatments(TreatmentRegistry& registry) {
  registry.Register(NetworkDelay());
  registry.Register(PacketLoss());
  registry.Register(ServicePause());
  registry.Register(ServiceKill());
  registry.Register(TraceSampling());
  registry.Register(ScrapeInterval());
  registry.Register(AlertThreshold());
  registry.Register(InstrumentationPoint());
}

std::vector<Violation> ValidateParams(const TreatmentDescriptor& descriptor,
                                      const ParamMap& params, const std::string& path) {
  std::vector<Violation> out;
  auto at = [&path](const std::string& name) { return path.empty() ? name : path + "." + name; };
  for (const auto& [name, value] : params) {
    auto spec = std::find_if(descriptor.params.begin(), descriptor.params.end(),
                             [&](const ParamSpec& p) { return p.name == name; });
    if (spec == descriptor.params.end()) {
      out.push_back({"UnknownParameter", at(name),
                     fmt::format("'{}' has no parameter '{}'", descriptor.type, name)});
      continue;
    }
    if (!ParamMatchesType(value, spec->type)) {
      out.push_back({"InvalidParameter", at(name),
                     fmt::format("expected {}", ParamTypeName(spec->type))});
      continue;
    }
    if (const auto* d = std::get_if<double>(&value)) {
      bool below = spec->min && (spec->min_exclusive ? *d <= *spec->min : *d < *spec->min);
      bool above = spec->max && *d > *spec->max;
      if (below || above || std::isnan(*d)) {
        out.push_back({"InvalidParameter", at(name),
                       fmt::format("{} is out of range [{}{}, {}]", ParamValueToString(value),
                                   spec->min_exclusive ? "(" : "",
                                   spec->min ? fmt::format("{}", *spec->min) : "-inf",
                                   spec->max ? fmt::format("{}", *spec->max) : "inf")});
      }
    }
  }
  for (const auto& spec : descriptor.params) {
    if (spec.required && !params.contains(spec.name)) {
      out.push_back({"MissingParameter", at(spec.name),
                     fmt::format("'{}' requires parameter '{}'", descriptor.type, spec.name)});
    }
  }
  if (out.empty() && descriptor.check) {
    for (auto& msg : descriptor.check(WithDefaults(descriptor, params))) {
      out.push_back({"InvalidParameter", path, std::move(msg)});
    }
  }
  return out;
}

ParamMap WithDefaults(const TreatmentDescriptor& descriptor, const ParamMap& params) {
  ParamMap out = params;
  for (const auto& spec : descriptor.params) {
    if (!out.contains(spec.name) && spec.fallback) out[spec.name] = *spec.fallback;
  }
  return out;
}

std::pair<std::string, std::optional<std::string>> SplitOverrideKey(std::string_view key) {
  auto at = key.find('@');
  if (at == std::string_view::npos) return {std::string(key), std::nullopt};
  return {std::string(key.substr(0, at)), std::string(key.substr(at + 1))};
}

bool ScheduledFault::Matches(std::string_view caller, std::string_view callee) const {
  switch (target.kind) {
    case TargetKind::kGlobal:
      return true;
    case TargetKind::kService:
      return target.service == callee;
    case TargetKind::kEdge:
      return target.service == caller && target.callee == callee;
    case TargetKind::kMetric:
      return false;
  }
  return false;
}

TreatmentSchedule CompileTreatments(const ExperimentPlan& plan, const VariantSpec& variant,
                                    const TreatmentRegistry& registry) {
  TreatmentSchedule schedule;

  struct Instrument {
    const TreatmentDescriptor* descriptor;
    std::string name;
    ParamMap params;
  };
  using Key = std::pair<std::string, Target>;
  std::map<Key, Instrument> instruments;

  for (const auto& t : plan.treatments) {
    const TreatmentDescriptor* d = registry.Find(t.type);
    if (d == nullptr) {
      throw ConfigError("UnknownTreatment", t.name, "treatment type '" + t.type + "' is not registered");
    }
    Target target = Target::Parse(t.target.ToString(), d->target);
    if (d->kind == TreatmentKind::kFault) {
      auto window = plan.WindowOf(t);
      if (!window) throw ConfigError("MissingWindow", t.name, "fault treatment has no window");
      ScheduledFault f;
      f.index = schedule.faults.size();
      f.name = t.name;
      f.type = t.type;
      f.target = target;
      f.window = *window;
      f.params = WithDefaults(*d, t.params);
      f.perturb = d->make_perturber(f.params);
      schedule.faults.push_back(std::move(f));
    } else {
      Key key{t.type, target};
      if (instruments.contains(key)) {
        throw ConfigError("ConflictingInstrumentation", t.name,
                          fmt::format("duplicate '{}' treatment on target '{}'", t.type,
                                      target.ToString()));
      }
      instruments.emplace(key, Instrument{d, t.name, t.params});
    }
  }

  for (const auto& [key, value] : variant.overrides) {
    auto [alias, target_text] = SplitOverrideKey(key);
    auto resolved = registry.ResolveOverride(alias);
    if (!resolved) {
      throw ConfigError("UnknownOverride", variant.name + "." + key,
                        "no instrumentation parameter named '" + alias + "'");
    }
    const TreatmentDescriptor* d = resolved->descriptor;
    Target target;
    if (target_text) {
      target = Target::Parse(*target_text, d->target);
    } else if (d->target != TargetKind::kGlobal) {
      std::vector<Target> existing;
      for (const auto& [k, v] : instruments) {
        if (k.first == d->type) existing.push_back(k.second);
      }
      if (existing.size() != 1) {
        throw ConfigError("InvalidOverride", variant.name + "." + key,
                          fmt::format("'{}' applies to a {}; write '{}@<target>'", alias,
                                      TargetKindName(d->target), alias));
      }
      target = existing.front();
    }
    Key k{d->type, target};
    auto it = instruments.find(k);
    if (it == instruments.end()) {
      it = instruments.emplace(k, Instrument{d, variant.name + ":" + key, {}}).first;
    }
    it->second.params[resolved->param] = value;
  }

  for (const auto& [key, inst] : instruments) {
    auto violations = ValidateParams(*inst.descriptor, inst.params, inst.name);
    if (!violations.empty()) {
      throw ConfigError(violations.front().code, violations.front().path,
                        violations.front().message);
    }
    inst.descriptor->configure(WithDefaults(*inst.descriptor, inst.params), key.second,
                               schedule.instrumentation);
  }

  for (const auto& f : schedule.faults) {
    schedule.events.push_back({f.window.start_s, true, f.index});
    schedule.events.push_back({f.window.end_s, false, f.index});
  }
  std::sort(schedule.events.begin(), schedule.events.end(),
            [](const ScheduleEvent& a, const ScheduleEvent& b) {
              return std::make_tuple(a.t_s, a.activate, a.fault) <
                     std::make_tuple(b.t_s, b.activate, b.fault);
            });
  return schedule;
}

CallPerturbation ApplyFault(const ScheduledFault& fault, const CallContext& context, Rng& rng) {
  if (!fault.window.ContainsMicros(context.time_us)) {
    throw std::logic_error("fault '" + fault.name + "' applied outside its window");
  }
  return fault.perturb(context, rng);
}

}  // namespace oxlab
