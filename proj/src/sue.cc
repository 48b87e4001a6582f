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

#include "oxlab/sue.h"

#include <algorithm>
#include <cmath>
#include <queue>

#include "oxlab/workload.h"
#include "parallel.h"

namespace oxlab {

namespace {

constexpr int64_t kMicros = 1'000'000;

// Stream tags mixed into per-request keys.
constexpr uint64_t kLatencyStream = 1;
constexpr uint64_t kFaultStream = 2;
constexpr uint64_t kStartStream = 3;
constexpr uint64_t kSamplerTag = 0x5a4d504cULL;

class TreeBuilder {
 public:
  TreeBuilder(const Topology& topology, uint64_t trace_id, Rng& latency_rng, Rng& fault_rng,
              std::span<const ScheduledFault> faults)
      : topology_(topology),
        trace_id_(trace_id),
        latency_rng_(latency_rng),
        fault_rng_(fault_rng),
        faults_(faults) {}

  struct Outcome {
    int64_t end_us;
    bool failed;
  };

  Outcome Call(std::string_view caller, size_t callee, std::optional<uint64_t> parent, int64_t t) {
    const ServiceSpec& spec = topology_.services[callee];
    CallPerturbation p;
    for (const auto& f : faults_) {
      if (!f.window.ContainsMicros(t) || !f.Matches(caller, spec.name)) continue;
      CallContext ctx{t, caller, spec.name, trace_id_, f.window.start_s * kMicros,
                      f.window.end_s * kMicros};
      p.Merge(ApplyFault(f, ctx, fault_rng_));
    }
    if (p.drop) return {t, true};

    int64_t arrival = t + p.added_delay_us;
    if (p.defer_until_us && *p.defer_until_us > arrival) arrival = *p.defer_until_us;

    size_t index = spans_.size();
    Span span;
    span.trace_id = trace_id_;
    span.span_id = index + 1;
    span.parent = parent;
    span.service = spec.name;
    span.start_us = arrival;
    spans_.push_back(std::move(span));
    if (p.kill) {
      spans_[index].error = true;
      return {arrival, true};
    }

    double own_ms = spec.latency.SampleMs(latency_rng_) * p.latency_factor;
    int64_t now = arrival + std::llround(own_ms * 1000.0);
    bool failed = false;
    uint64_t span_id = index + 1;
    for (const auto& call : spec.calls) {
      size_t child = *topology_.IndexOf(call.callee);
      for (int64_t k = 0; k < call.count && !failed; ++k) {
        Outcome o = Call(spec.name, child, span_id, now);
        now = o.end_us;
        failed = o.failed;
      }
      if (failed) break;
    }
    spans_[index].duration_us = now - arrival;
    spans_[index].error = failed;
    return {now, failed};
  }

  std::vector<Span> TakeSpans() { return std::move(spans_); }

 private:
  const Topology& topology_;
  uint64_t trace_id_;
  Rng& latency_rng_;
  Rng& fault_rng_;
  std::span<const ScheduledFault> faults_;
  std::vector<Span> spans_;
};

// Spans of disabled services are dropped and their children re-parented to
// the nearest exported ancestor. Returns nothing when the root is disabled.
std::optional<Trace> ExportTrace(uint64_t trace_id, const std::vector<Span>& spans,
                                 const InstrumentationConfig& cfg) {
  if (spans.empty() || !cfg.SpansEnabled(spans.front().service)) return std::nullopt;
  Trace trace;
  trace.trace_id = trace_id;
  // exported_parent[i]: nearest exported ancestor-or-self of span i.
  std::vector<std::optional<uint64_t>> exported(spans.size() + 1);
  for (const auto& s : spans) {
    std::optional<uint64_t> up = s.parent ? exported[*s.parent] : std::nullopt;
    if (cfg.SpansEnabled(s.service)) {
      Span copy = s;
      copy.parent = up;
      trace.spans.push_back(std::move(copy));
      exported[s.span_id] = s.span_id;
    } else {
      exported[s.span_id] = up;
    }
  }
  return trace;
}

class Simulation {
 public:
  Simulation(const ExperimentPlan& plan, const Topology& topology, const TreatmentSchedule& schedule,
             std::string variant, uint64_t seed)
      : plan_(plan),
        topology_(topology),
        schedule_(schedule),
        population_(plan.workload.profile, plan.phases.ramp_up_s * kMicros),
        scraper_(topology, schedule.instrumentation.scrape_interval_s, plan.phases.duration_s),
        seed_(seed),
        sampler_seed_(HashKey({seed, kSamplerTag})),
        duration_us_(plan.phases.duration_s * kMicros),
        windows_(topology.services.size()) {
    result_.variant = std::move(variant);
    result_.seed = seed;
    result_.duration_s = plan.phases.duration_s;
    result_.instrumentation = schedule.instrumentation;
    auto entry = topology.IndexOf(topology.entry);
    if (!entry) throw ConfigError("InvalidTopology", "topology.entry", "entry service not found");
    entry_ = *entry;
    for (const auto& s : topology.services) result_.usage[s.name] = {};
  }

  RunResult Run() {
    for (int64_t u = 0; u < population_.MaxUsers(); ++u) {
      auto active = population_.NextActive(u, 0);
      if (!active) continue;
      Rng start(HashKey({seed_, static_cast<uint64_t>(u), 0, kStartStream}));
      int64_t t = *active + plan_.workload.think_time.SampleMicros(start);
      if (t < duration_us_) Push(t, kStart, Kind::kIssue, u, 0);
    }
    for (int64_t t : scraper_.ScrapeTimes()) Push(t, kLast, Kind::kScrape, 0, 0);
    for (size_t i = 0; i < schedule_.events.size(); ++i) {
      Push(schedule_.events[i].t_s * kMicros, kMiddle, Kind::kTreatment, static_cast<int64_t>(i), 0);
    }

    while (!queue_.empty()) {
      Event e = queue_.top();
      queue_.pop();
      switch (e.kind) {
        case Kind::kIssue:
          Issue(e.t, e.a, e.b);
          break;
        case Kind::kSpanStart: {
          ServiceWindow& w = windows_[e.a];
          ++w.in_flight;
          ++w.started;
          w.cpu += e.b;
          break;
        }
        case Kind::kSpanEnd: {
          ServiceWindow& w = windows_[e.a];
          --w.in_flight;
          ++w.ended;
          w.ended_duration_us += e.b & kDurationMask;
          if (e.b & kErrorBit) ++w.errors;
          break;
        }
        case Kind::kScrape: {
          int n = scraper_.Scrape(e.t, windows_, result_.metrics);
          for (const auto& s : topology_.services) result_.usage[s.name].metric_samples += n;
          break;
        }
        case Kind::kTreatment: {
          const ScheduleEvent& ev = schedule_.events[e.a];
          const ScheduledFault& f = schedule_.faults[ev.fault];
          result_.events.push_back({ev.t_s, f.name, f.type, f.target.ToString(), ev.activate});
          break;
        }
      }
    }
    result_.costs = SettleCosts(topology_, result_.usage, plan_.phases.duration_s);
    return std::move(result_);
  }

 private:
  enum class Kind { kIssue, kSpanStart, kSpanEnd, kScrape, kTreatment };
  // Same-timestamp ordering: span ends, treatment edges, starts, then scrapes.
  static constexpr int kFirst = 0;
  static constexpr int kMiddle = 1;
  static constexpr int kStart = 2;
  static constexpr int kLast = 3;
  static constexpr int64_t kErrorBit = int64_t{1} << 62;
  static constexpr int64_t kDurationMask = kErrorBit - 1;

  struct Event {
    int64_t t;
    int priority;
    uint64_t seq;
    Kind kind;
    int64_t a;
    int64_t b;
    bool operator>(const Event& o) const {
      if (t != o.t) return t > o.t;
      if (priority != o.priority) return priority > o.priority;
      return seq > o.seq;
    }
  };

  void Push(int64_t t, int priority, Kind kind, int64_t a, int64_t b) {
    queue_.push(Event{t, priority, next_seq_++, kind, a, b});
  }

  void Issue(int64_t t, int64_t user, int64_t seq) {
    if (user >= population_.ActiveUsers(t)) {
      auto next = population_.NextActive(user, t);
      if (next && *next < duration_us_) Push(*next, kStart, Kind::kIssue, user, seq);
      return;
    }
    auto u = static_cast<uint64_t>(user);
    auto k = static_cast<uint64_t>(seq);
    uint64_t trace_id = ((u + 1) << 32) | (k & 0xffffffffULL);
    Rng latency(HashKey({seed_, u, k, kLatencyStream}));
    Rng fault(HashKey({seed_, u, k, kFaultStream}));
    SpanTree tree = BuildCallTree(topology_, entry_, t, trace_id, latency, fault, schedule_.faults);

    ++result_.requests;
    if (tree.failed) ++result_.failed_requests;
    const InstrumentationConfig& cfg = schedule_.instrumentation;
    bool sampled = HeadSample(trace_id, cfg.trace_sampling_rate, sampler_seed_);
    bool root_enabled = !tree.spans.empty() && cfg.SpansEnabled(tree.spans.front().service);
    for (const auto& s : tree.spans) {
      size_t svc = *topology_.IndexOf(s.service);
      const CostParams& cost = topology_.services[svc].cpu;
      ServiceUsage& usage = result_.usage[s.service];
      ++usage.spans;
      if (s.error) ++usage.errors;
      MicroCpu cpu = cost.per_request;
      if (sampled && root_enabled && cfg.SpansEnabled(s.service)) {
        ++usage.exported_spans;
        cpu += cost.per_span_exported;
      }
      Push(s.start_us, kStart, Kind::kSpanStart, static_cast<int64_t>(svc), cpu);
      Push(s.end_us(), kFirst, Kind::kSpanEnd, static_cast<int64_t>(svc),
           s.duration_us | (s.error ? kErrorBit : 0));
    }
    if (sampled) {
      if (auto trace = ExportTrace(trace_id, tree.spans, cfg)) result_.traces.push_back(std::move(*trace));
    }

    int64_t next = tree.end_us + plan_.workload.think_time.SampleMicros(latency);
    next = std::max(next, t + 1);
    if (next < duration_us_) Push(next, kStart, Kind::kIssue, user, seq + 1);
  }

  const ExperimentPlan& plan_;
  const Topology& topology_;
  const TreatmentSchedule& schedule_;
  UserPopulation population_;
  MetricScraper scraper_;
  uint64_t seed_;
  uint64_t sampler_seed_;
  int64_t duration_us_;
  size_t entry_ = 0;
  std::vector<ServiceWindow> windows_;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue_;
  uint64_t next_seq_ = 0;
  RunResult result_;
};

}  // namespace

int64_t RunResult::exported_spans() const {
  int64_t n = 0;
  for (const auto& [name, u] : usage) n += u.exported_spans;
  return n;
}

uint64_t SplitSeed(uint64_t base_seed, uint64_t variant, uint64_t repetition) {
  return HashKey({base_seed, variant, repetition});
}

SpanTree BuildCallTree(const Topology& topology, size_t service, int64_t start_us,
                       uint64_t trace_id, Rng& latency_rng, Rng& fault_rng,
                       std::span<const ScheduledFault> faults) {
  TreeBuilder builder(topology, trace_id, latency_rng, fault_rng, faults);
  auto outcome = builder.Call({}, service, std::nullopt, start_us);
  SpanTree tree;
  tree.spans = builder.TakeSpans();
  tree.end_us = outcome.end_us;
  tree.failed = outcome.failed;
  return tree;
}

RunResult SimulateSchedule(const ExperimentPlan& plan, const Topology& topology,
                           const TreatmentSchedule& schedule, const std::string& variant,
                           uint64_t seed) {
  if (plan.phases.duration_s <= 0) {
    throw ConfigError("InvalidPhases", "phases.duration_s", "duration must be > 0");
  }
  return Simulation(plan, topology, schedule, variant, seed).Run();
}

RunResult SimulateRun(const ExperimentPlan& plan, const Topology& topology,
                      const VariantSpec& variant, uint64_t seed,
                      const TreatmentRegistry& registry) {
  TreatmentSchedule schedule = CompileTreatments(plan, variant, registry);
  return SimulateSchedule(plan, topology, schedule, variant.name, seed);
}

std::vector<RunResult> RunAll(const ExperimentPlan& plan, const Topology& topology, int jobs,
                              const TreatmentRegistry& registry) {
  auto variants = plan.EffectiveVariants();
  auto reps = static_cast<size_t>(std::max<int64_t>(plan.repetitions, 1));
  size_t total = variants.size() * reps;
  std::vector<RunResult> results(total);

  auto run_one = [&](size_t i) {
    size_t v = i / reps;
    size_t k = i % reps;
    RunResult r = SimulateRun(plan, topology, variants[v], SplitSeed(plan.base_seed, v, k), registry);
    r.repetition = static_cast<int64_t>(k);
    results[i] = std::move(r);
  };

  ParallelFor(total, jobs, run_one);
  return results;
}

}  // namespace oxlab
