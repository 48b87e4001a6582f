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

// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.

#include <fmt/format.h>

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "oxlab/analysis.h"
#include "oxlab/assurance.h"
#include "oxlab/plan.h"
#include "oxlab/report.h"
#include "oxlab/sue.h"
#include "oxlab/telemetry.h"
#include "test_util.h"

namespace oxlab {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

int Shell(const std::string& cmd) {
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string Cli(const std::string& args) { return fmt::format("'{}' {} >/dev/null 2>&1", OXLAB_CLI_PATH, args); }

std::string StripMetadata(const std::string& text) {
  auto j = nlohmann::ordered_json::parse(text);
  j.erase("metadata");
  return j.dump();
}

// Runs every demo variant at seeds 0..19; shared by criteria 2 and 3.
struct DemoSweep {
  static constexpr int kSeeds = 20;
  LoadedPlan lp = testing::DemoPlan();
  std::vector<VariantSpec> variants = lp.plan.EffectiveVariants();
  std::vector<std::vector<RunResult>> runs;  // [variant][seed]
  double seconds = 0;

  DemoSweep() {
    auto start = Clock::now();
    for (const auto& v : variants) {
      runs.emplace_back();
      for (int s = 0; s < kSeeds; ++s) runs.back().push_back(SimulateRun(lp.plan, lp.topology, v, s));
    }
    seconds = Seconds(start);
  }
};

Outcome OverheadExamples() {
  double a = Overhead(191.83, 197.68).overhead_percent;
  double b = Overhead(191.83, 202.06).overhead_percent;
  return {std::fabs(a - 3.05) <= 0.005 && std::fabs(b - 5.33) <= 0.005, fmt::format("{:+.4f}% {:+.4f}%", a, b)};
}

Outcome VisibilityOrdering(const DemoSweep& sweep) {
  const auto& plan = sweep.lp.plan;
  TimeWindow window = *FaultWindow(plan);
  std::map<double, double> by_rate;
  auto start = Clock::now();
  for (size_t v = 0; v < sweep.variants.size(); ++v) {
    double sum = 0;
    for (const auto& r : sweep.runs[v]) {
      auto labeled = LabelObservations(ResponseSeries(r, plan.response_variables[0]), window);
      sum += ScoreVisibility(labeled, plan.analysis.alpha, plan.analysis.beta).balanced_accuracy;
    }
    by_rate[sweep.runs[v][0].instrumentation.trace_sampling_rate] = sum / DemoSweep::kSeeds;
  }
  double seconds = sweep.seconds + Seconds(start);
  double lo = by_rate.at(0.01), mid = by_rate.at(0.05), hi = by_rate.at(0.10);
  bool ok = by_rate.size() == 3 && hi - mid > 0.02 && mid - lo > 0.02 && seconds < 120;
  return {ok, fmt::format("mean BA 1%={:.3f} 5%={:.3f} 10%={:.3f} in {:.1f}s", lo, mid, hi, seconds)};
}

Outcome CostMonotone(const DemoSweep& sweep) {
  std::vector<size_t> order(sweep.variants.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return sweep.runs[a][0].instrumentation.trace_sampling_rate < sweep.runs[b][0].instrumentation.trace_sampling_rate;
  });
  int checked = 0;
  for (int s = 0; s < DemoSweep::kSeeds; ++s) {
    for (size_t i = 1; i < order.size(); ++i) {
      const RunResult& lo = sweep.runs[order[i - 1]][s];
      const RunResult& hi = sweep.runs[order[i]][s];
      if (!(hi.costs.total() > lo.costs.total())) return {false, fmt::format("seed {} not increasing", s)};
      MicroCpu expected = 0;
      for (const auto& svc : sweep.lp.topology.services) {
        expected += svc.cpu.per_span_exported *
                    (hi.usage.at(svc.name).exported_spans - lo.usage.at(svc.name).exported_spans);
      }
      if (hi.costs.total() - lo.costs.total() != expected) {
        return {false, fmt::format("seed {}: delta {} != {}", s, hi.costs.total() - lo.costs.total(), expected)};
      }
      ++checked;
    }
  }
  return {true, fmt::format("{} ordered pairs, deltas exact", checked)};
}

Outcome MannWhitneyExact() {
  Rng rng(31337);
  int cases = 0;
  for (size_t n = 1; n < 10; ++n) {
    for (size_t m = 1; n + m <= 10; ++m) {
      for (int rep = 0; rep < 4; ++rep) {
        std::vector<double> a(n), b(m), pool;
        for (auto& x : a) x = std::floor(rng.Uniform(0, rep < 2 ? 3 : 1000));
        for (auto& x : b) x = std::floor(rng.Uniform(0, rep < 2 ? 3 : 1000));
        pool = a;
        pool.insert(pool.end(), b.begin(), b.end());
        auto u_of = [](const std::vector<double>& x, const std::vector<double>& y) {
          double u = 0;
          for (double p : x)
            for (double q : y) u += p > q ? 1.0 : (p == q ? 0.5 : 0.0);
          return u;
        };
        double u_obs = u_of(a, b);
        uint64_t total = 0, greater = 0, less = 0;
        for (uint32_t mask = 0; mask < (1u << pool.size()); ++mask) {
          if (static_cast<size_t>(std::popcount(mask)) != n) continue;
          std::vector<double> x, y;
          for (size_t i = 0; i < pool.size(); ++i) (mask >> i & 1 ? x : y).push_back(pool[i]);
          double u = u_of(x, y);
          ++total;
          greater += u >= u_obs;
          less += u <= u_obs;
        }
        MannWhitneyResult r = MannWhitney(a, b);
        if (!r.exact || r.u != u_obs || r.exact_total != total || r.exact_greater != greater ||
            r.exact_less != less) {
          return {false, fmt::format("mismatch at {}x{}", n, m)};
        }
        ++cases;
      }
    }
  }
  MannWhitneyResult ex = MannWhitney({1, 2, 3}, {4, 5, 6});
  bool ok = ex.exact_less == 1 && ex.exact_total == 20 && ex.p_less == 0.05;
  return {ok, fmt::format("{} samples match enumeration; [1,2,3] vs [4,5,6] p = {}/{} = {}", cases,
                          ex.exact_less, ex.exact_total, ex.p_less)};
}

Outcome NoSignal() {
  LoadedPlan lp = testing::DemoPlan();
  ExperimentPlan plan = lp.plan;
  std::erase_if(plan.treatments, [](const TreatmentSpec& t) {
    return TreatmentRegistry::Default().Find(t.type)->kind == TreatmentKind::kFault;
  });
  TimeWindow window = *lp.plan.phases.fault_window;
  std::string detail;
  bool ok = true;
  for (const auto& v : plan.EffectiveVariants()) {
    int detected = 0;
    for (int s = 0; s < 100; ++s) {
      RunResult r = SimulateRun(plan, lp.topology, v, 1000 + s);
      auto labeled = LabelObservations(ResponseSeries(r, plan.response_variables[0]), window);
      detected += ScoreVisibility(labeled, plan.analysis.alpha, plan.analysis.beta).detected;
    }
    ok &= 100 - detected >= 95;
    detail += fmt::format("{}: {}/100 clean  ", v.name, 100 - detected);
  }
  return {ok, detail};
}

Outcome Sampling() {
  int kept = 0;
  bool subset = true;
  int kept_hi = 0;
  for (uint64_t id = 0; id < 100'000; ++id) {
    bool lo = HeadSample(id, 0.05, 42), hi = HeadSample(id, 0.10, 42);
    kept += lo;
    kept_hi += hi;
    subset &= !lo || hi;
  }
  bool ok = kept >= 4793 && kept <= 5207 && subset;
  return {ok, fmt::format("kept {} at 0.05, {} at 0.10, subset={}", kept, kept_hi, subset)};
}

Outcome Reproducible(const std::string& tmp) {
  std::string plan = testing::SourcePath("demo/delay-experiment.yaml");
  if (Shell(Cli(fmt::format("run '{}' -o '{}/r1' -j 1", plan, tmp))) != 0 ||
      Shell(Cli(fmt::format("run '{}' -o '{}/r2' -j 1", plan, tmp))) != 0 ||
      Shell(Cli(fmt::format("run '{}' -o '{}/r3' -j 8", plan, tmp))) != 0) {
    return {false, "oxlab run failed"};
  }
  std::string a = StripMetadata(testing::Slurp(tmp + "/r1/assessment.json"));
  std::string b = StripMetadata(testing::Slurp(tmp + "/r2/assessment.json"));
  std::string c = StripMetadata(testing::Slurp(tmp + "/r3/assessment.json"));
  return {a == b && b == c, fmt::format("{} bytes, -j 1 twice and -j 8 identical: {}", a.size(), a == b && b == c)};
}

Outcome FaultLocality() {
  LoadedPlan lp = testing::DemoPlan();
  ExperimentPlan clean = lp.plan;
  std::erase_if(clean.treatments, [](const TreatmentSpec& t) { return t.type == "network_delay"; });
  TimeWindow w = *lp.plan.phases.fault_window;
  VariantSpec all{"all", {{"trace_sampling_rate", 1.0}}};
  RunResult f = SimulateRun(lp.plan, lp.topology, all, 9);
  RunResult n = SimulateRun(clean, lp.topology, all, 9);
  std::map<uint64_t, const Trace*> by_id;
  for (const auto& t : n.traces) by_id[t.trace_id] = &t;
  auto relative = [](const Trace& t) {
    Trace out = t;
    for (auto& s : out.spans) s.start_us -= t.start_us();
    return out;
  };
  int64_t before = 0, after = 0;
  for (const auto& t : f.traces) {
    int64_t end = t.start_us() + t.root_duration_us();
    auto it = by_id.find(t.trace_id);
    if (end < w.start_s * 1'000'000) {
      if (it == by_id.end() || *it->second != t) return {false, fmt::format("pre-window trace {:x} differs", t.trace_id)};
      ++before;
    } else if (t.start_us() >= w.end_s * 1'000'000 && it != by_id.end()) {
      if (relative(*it->second) != relative(t)) return {false, fmt::format("post-window trace {:x} differs", t.trace_id)};
      ++after;
    }
  }
  return {before > 0 && after > 0, fmt::format("{} pre-window traces identical, {} post-window traces identical", before, after)};
}

Outcome Budget() {
  SloPolicy p{0.999, 90, 0};
  ErrorBudget fresh = ComputeErrorBudget(p);
  ErrorBudget after = ComputeErrorBudget(RecordIncident(p, 60));
  ErrorBudget over = ComputeErrorBudget(RecordIncident(p, 500));
  bool ok = fresh.total_tenths == 1296 && after.remaining_tenths == 696 && over.remaining_tenths == 0;
  return {ok, fmt::format("total {:.1f} min, after 60 min {:.1f} min, after 500 min {:.1f} min", fresh.total_minutes(),
                          after.remaining_minutes(), over.remaining_minutes())};
}

Outcome Suite() {
  auto src = LoadScenarioDir(testing::SourcePath("demo/scenarios"));
  Topology topo = testing::DemoTopology();
  auto verdict_for = [&](const std::string& variants_file, const std::string& rate_variant) {
    auto v = ParseSuiteVariants(testing::Slurp(testing::SourcePath(variants_file)));
    SuiteReport r = RunScenarioSuite(src, topo, v);
    for (const auto& o : r.outcomes) {
      if (o.scenario == "recommendation-delay" && o.variant == rate_variant) return o.verdict;
    }
    return std::string("missing");
  };
  std::string off = verdict_for("demo/variants.yaml", "no-tracing");
  std::string on = verdict_for("demo/variants.yaml", "sampling-10");
  std::string args = fmt::format("suite '{}' --topology '{}' --variants '{}'", testing::SourcePath("demo/scenarios"),
                                 testing::SourcePath("demo/astronomy-lite.yaml"), "{}");
  int exit_off = Shell(Cli(fmt::vformat(args, fmt::make_format_args(testing::SourcePath("demo/variants-no-tracing.yaml")))));
  int exit_on = Shell(Cli(fmt::vformat(args, fmt::make_format_args(testing::SourcePath("demo/variants.yaml")))));
  bool ok = off == kNoDataVerdict && on == "pass" && exit_off == 1 && exit_on == 0;
  return {ok, fmt::format("0%: \"{}\" (exit {}), 10%: \"{}\" (exit {})", off, exit_off, on, exit_on)};
}

Outcome FullDemo(const std::string& tmp) {
  LoadedPlan lp = testing::DemoPlan();
  auto start = Clock::now();
  int code = Shell(Cli(fmt::format("run '{}' -o '{}/demo'", testing::SourcePath("demo/delay-experiment.yaml"), tmp)));
  double seconds = Seconds(start);
  if (code != 0) return {false, fmt::format("oxlab run exited {}", code)};
  int64_t bin = lp.plan.analysis.bin_width_s;
  int64_t want = lp.plan.phases.duration_s / bin;
  bool ok = seconds < 60;
  std::string rows;
  for (const auto& v : lp.plan.EffectiveVariants()) {
    std::string csv = testing::Slurp(fmt::format("{}/demo/plotdata/{}.csv", tmp, SafeFileName(v.name)));
    int64_t n = std::count(csv.begin(), csv.end(), '\n') - 1;
    ok &= n == want;
    rows += fmt::format(" {}={}", v.name, n);
  }
  return {ok, fmt::format("{:.1f}s, plot rows{} (want {})", seconds, rows, want)};
}

}  // namespace
}  // namespace oxlab

int main() {
  using namespace oxlab;
  testing::TempDir tmp;
  std::unique_ptr<DemoSweep> sweep;
  auto demo = [&]() -> const DemoSweep& {
    if (!sweep) sweep = std::make_unique<DemoSweep>();
    return *sweep;
  };
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"overhead examples", OverheadExamples},
      {"visibility ordering over 20 seeds", [&] { return VisibilityOrdering(demo()); }},
      {"cost monotone in sampling rate", [&] { return CostMonotone(demo()); }},
      {"exact Mann-Whitney equals enumeration", MannWhitneyExact},
      {"no false detection without faults", NoSignal},
      {"head sampling rate and subsets", Sampling},
      {"byte-identical reruns", [&] { return Reproducible(tmp.path()); }},
      {"fault locality", FaultLocality},
      {"error budget arithmetic", Budget},
      {"scenario suite verdicts and exit codes", Suite},
      {"full demo timing and plot rows", [&] { return FullDemo(tmp.path()); }},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    fmt::print("{} {:>2} {}: {}\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail);
    std::fflush(stdout);
  }
  fmt::print("{}/{} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
