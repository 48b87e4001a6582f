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

#include "oxlab/assurance.h"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

#include "json.hpp"
#include "oxlab/errors.h"
#include "oxlab/sue.h"
#include "parallel.h"
#include "plan_io.h"
#include "yaml_util.h"

namespace oxlab {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

int64_t MinutesToTenths(double minutes) { return std::llround(minutes * 10.0); }

double TenthsToMinutes(int64_t tenths) { return static_cast<double>(tenths) / 10.0; }

double ErrorBudget::remaining_fraction() const {
  if (total_tenths <= 0) return 0.0;
  return static_cast<double>(remaining_tenths) / static_cast<double>(total_tenths);
}

std::string CheckPolicy(const SloPolicy& policy) {
  if (!(policy.availability_target > 0.0 && policy.availability_target <= 1.0)) {
    return fmt::format("availability target must be in (0, 1], got {}", policy.availability_target);
  }
  if (policy.period_days <= 0) {
    return fmt::format("period must be positive, got {} days", policy.period_days);
  }
  if (policy.consumed_tenths < 0) return "consumed downtime must be nonnegative";
  return {};
}

ErrorBudget ComputeErrorBudget(const SloPolicy& policy) {
  if (std::string err = CheckPolicy(policy); !err.empty()) throw std::invalid_argument(err);
  ErrorBudget b;
  double minutes = (1.0 - policy.availability_target) * static_cast<double>(policy.period_days) * 24.0 * 60.0;
  b.total_tenths = MinutesToTenths(minutes);
  b.consumed_tenths = policy.consumed_tenths;
  b.remaining_tenths = std::max<int64_t>(0, b.total_tenths - b.consumed_tenths);
  return b;
}

SloPolicy RecordIncident(SloPolicy policy, double downtime_minutes) {
  if (!(downtime_minutes >= 0.0) || !std::isfinite(downtime_minutes)) {
    throw std::invalid_argument(fmt::format("downtime must be nonnegative, got {}", downtime_minutes));
  }
  if (std::string err = CheckPolicy(policy); !err.empty()) throw std::invalid_argument(err);
  policy.consumed_tenths += MinutesToTenths(downtime_minutes);
  return policy;
}

// ---------------------------------------------------------------------------
// Ledger file

std::optional<BudgetLedger> LoadBudgetLedger(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    if (!fs::exists(path)) return std::nullopt;
    throw ConfigError("Io", path, "cannot read budget ledger '" + path + "'");
  }
  BudgetLedger ledger;
  try {
    Json j = Json::parse(in);
    ledger.policy.availability_target = j.at("target").get<double>();
    ledger.policy.period_days = j.at("period_days").get<int64_t>();
    ledger.policy.consumed_tenths = MinutesToTenths(j.at("consumed_minutes").get<double>());
    for (const auto& h : j.value("history", Json::array())) {
      ledger.history.push_back({h.at("minutes").get<double>(), h.value("note", std::string())});
    }
  } catch (const Json::exception& e) {
    throw ConfigError("InvalidLedger", path, std::string("malformed budget ledger: ") + e.what());
  }
  if (std::string err = CheckPolicy(ledger.policy); !err.empty()) {
    throw ConfigError("InvalidLedger", path, err);
  }
  return ledger;
}

void SaveBudgetLedger(const std::string& path, const BudgetLedger& ledger) {
  Json j;
  j["target"] = ledger.policy.availability_target;
  j["period_days"] = ledger.policy.period_days;
  j["consumed_minutes"] = ledger.policy.consumed_minutes();
  j["history"] = Json::array();
  for (const auto& h : ledger.history) {
    j["history"].push_back(Json{{"minutes", h.minutes}, {"note", h.note}});
  }
  std::string tmp = fmt::format("{}.tmp.{}", path, ::getpid());
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw ConfigError("Io", path, "cannot write budget ledger '" + path + "'");
    out << j.dump(2) << "\n";
    if (!out) throw ConfigError("Io", path, "cannot write budget ledger '" + path + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ConfigError("Io", path, "cannot replace budget ledger '" + path + "'");
  }
}

LedgerLock::LedgerLock(const std::string& ledger_path) {
  std::string lock_path = ledger_path + ".lock";
  fd_ = ::open(lock_path.c_str(), O_CREAT | O_RDWR | O_CLOEXEC, 0644);
  if (fd_ < 0) {
    throw ConfigError("Io", lock_path, fmt::format("cannot open lock file: {}", std::strerror(errno)));
  }
  while (::flock(fd_, LOCK_EX) != 0) {
    if (errno == EINTR) continue;
    int err = errno;
    ::close(fd_);
    throw ConfigError("Io", lock_path, fmt::format("cannot lock: {}", std::strerror(err)));
  }
}

LedgerLock::~LedgerLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

BudgetLedger AppendIncident(const std::string& path, double downtime_minutes, const std::string& note) {
  LedgerLock lock(path);
  BudgetLedger ledger = LoadBudgetLedger(path).value_or(BudgetLedger{});
  ledger.policy = RecordIncident(ledger.policy, downtime_minutes);
  ledger.history.push_back({TenthsToMinutes(MinutesToTenths(downtime_minutes)), note});
  SaveBudgetLedger(path, ledger);
  return ledger;
}

BudgetLedger SetPolicy(const std::string& path, double target, int64_t period_days) {
  LedgerLock lock(path);
  BudgetLedger ledger = LoadBudgetLedger(path).value_or(BudgetLedger{});
  ledger.policy.availability_target = target;
  ledger.policy.period_days = period_days;
  if (std::string err = CheckPolicy(ledger.policy); !err.empty()) throw std::invalid_argument(err);
  SaveBudgetLedger(path, ledger);
  return ledger;
}

// ---------------------------------------------------------------------------
// Scenarios

IncidentScenario ParseScenario(const std::string& text) {
  YAML::Node root = yaml::Parse(text, "scenario");
  if (!root.IsMap()) yaml::Fail("TypeMismatch", "", "scenario must be a mapping", root);
  yaml::MapReader r(root, "");
  IncidentScenario s;
  s.id = r.Get<std::string>("id");
  s.description = r.GetOr<std::string>("description", "");
  if (YAML::Node w = r.Optional("workload")) s.workload = plan_io::ReadWorkload(w, "workload");
  s.phases = plan_io::ReadPhases(r.Required("phases"), "phases");
  YAML::Node ts = r.Required("treatments");
  yaml::ExpectSeq(ts, "treatments");
  for (size_t i = 0; i < ts.size(); ++i) {
    s.treatments.push_back(plan_io::ReadTreatment(ts[i], yaml::Index("treatments", i)));
  }
  YAML::Node rv = r.Required("response_variables");
  yaml::ExpectSeq(rv, "response_variables");
  for (size_t i = 0; i < rv.size(); ++i) {
    s.response_variables.push_back(plan_io::ReadResponse(rv[i], yaml::Index("response_variables", i)));
  }
  s.seed = r.GetOr<uint64_t>("seed", 0);
  s.repetitions = r.GetOr<int64_t>("repetitions", 1);
  if (YAML::Node a = r.Optional("analysis")) s.analysis = plan_io::ReadAnalysis(a, "analysis");

  yaml::MapReader e(r.Required("expect"), "expect");
  if (YAML::Node d = e.Optional("must_detect")) {
    yaml::MapReader dr(d, e.Path("must_detect"));
    s.expect.must_detect = MustDetect{dr.Get<std::string>("response"), dr.Get<double>("max_latency_s")};
    dr.Finish();
  }
  if (YAML::Node m = e.Optional("must_score")) {
    yaml::MapReader mr(m, e.Path("must_score"));
    s.expect.must_score = MustScore{mr.Get<std::string>("response"),
                                    mr.Get<double>("min_balanced_accuracy")};
    mr.Finish();
  }
  e.Finish();
  if (!s.expect.must_detect && !s.expect.must_score) {
    yaml::Fail("MissingField", "expect", "expect needs must_detect or must_score", e.node());
  }
  r.Finish();
  return s;
}

SuiteVariants ParseSuiteVariants(const std::string& text) {
  YAML::Node root = yaml::Parse(text, "variants");
  if (!root.IsMap()) yaml::Fail("TypeMismatch", "", "variant config must be a mapping", root);
  yaml::MapReader r(root, "");
  SuiteVariants out;
  out.current = r.Get<std::string>("current");
  YAML::Node vs = r.Required("variants");
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
      yaml::Fail("DuplicateVariant", vr.Path("name"), "duplicate variant '" + v.name + "'", vs[i]["name"]);
    }
    out.variants.push_back(std::move(v));
  }
  if (!names.contains(out.current)) {
    yaml::Fail("UnknownVariant", "current", "current variant '" + out.current + "' is not declared",
               root["current"]);
  }
  r.Finish();
  return out;
}

std::vector<ScenarioSource> LoadScenarioDir(const std::string& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw ConfigError("Io", dir, "scenario directory '" + dir + "' does not exist");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    auto ext = entry.path().extension();
    if (entry.is_regular_file() && (ext == ".yaml" || ext == ".yml")) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<ScenarioSource> out;
  for (const auto& f : files) {
    ScenarioSource src;
    src.file = f.string();
    try {
      src.scenario = ParseScenario(ReadTextFile(src.file));
    } catch (const ConfigError& e) {
      src.error = e.what();
    }
    out.push_back(std::move(src));
  }
  return out;
}

ExperimentPlan ScenarioPlan(const IncidentScenario& scenario, const Topology& topology,
                            const VariantSpec& variant) {
  ExperimentPlan plan;
  plan.id = scenario.id;
  plan.topology = topology;
  plan.workload = scenario.workload;
  plan.phases = scenario.phases;
  plan.treatments = scenario.treatments;
  plan.response_variables = scenario.response_variables;
  plan.variants = {variant};
  plan.baseline = variant.name;
  plan.repetitions = scenario.repetitions;
  plan.base_seed = scenario.seed;
  plan.analysis = scenario.analysis;
  return plan;
}

namespace {

const ResponseVariableSpec* FindResponse(const IncidentScenario& s, const std::string& name) {
  for (const auto& r : s.response_variables) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

struct Check {
  bool passed = true;
  std::string verdict = "pass";
  std::string detail;
  std::optional<double> latency_s;
  std::optional<double> balanced_accuracy;
};

Check CheckRun(const IncidentScenario& s, const RunResult& run, const TimeWindow& window) {
  Check c;
  std::vector<std::string> details;
  auto fail = [&](std::string verdict, std::string detail) {
    if (c.passed) {
      c.passed = false;
      c.verdict = std::move(verdict);
    }
    details.push_back(std::move(detail));
  };

  if (s.expect.must_detect) {
    const MustDetect& md = *s.expect.must_detect;
    const ResponseVariableSpec& spec = *FindResponse(s, md.response);
    auto series = ResponseSeries(run, spec);
    VisibilityScore score =
        ScoreVisibility(LabelObservations(series, window), s.analysis.alpha, s.analysis.beta);
    const AlertRule* alert = nullptr;
    for (const auto& a : run.instrumentation.alerts) {
      if (a.metric == spec.name || a.metric == spec.source.ref) {
        alert = &a;
        break;
      }
    }
    if (!score.defined) {
      fail(kNoDataVerdict, fmt::format("{}: no observations in one label class", md.response));
    } else if (alert) {
      // Binned observations are only known once their bin closes.
      std::vector<Observation> closed = series;
      for (auto& o : closed) o.t_s += static_cast<double>(spec.window_s);
      c.latency_s = DetectionLatency(closed, *alert, static_cast<double>(window.start_s));
      if (!c.latency_s) {
        fail("not detected", fmt::format("{}: alert above {} never fired", md.response, alert->threshold));
      } else if (*c.latency_s > md.max_latency_s) {
        fail("latency exceeded",
             fmt::format("{}: detected after {} s, limit {} s", md.response, *c.latency_s, md.max_latency_s));
      } else {
        details.push_back(fmt::format("{}: detected after {} s", md.response, *c.latency_s));
      }
    } else if (!score.detected) {
      fail("not detected", fmt::format("{}: balanced accuracy {:.3f}, p = {:.3g}", md.response,
                                       score.balanced_accuracy, score.p_value));
    } else {
      details.push_back(fmt::format("{}: detected by classifier", md.response));
    }
  }

  if (s.expect.must_score) {
    const MustScore& ms = *s.expect.must_score;
    const ResponseVariableSpec& spec = *FindResponse(s, ms.response);
    VisibilityScore score = ScoreVisibility(LabelObservations(ResponseSeries(run, spec), window),
                                            s.analysis.alpha, s.analysis.beta);
    if (!score.defined) {
      fail(kNoDataVerdict, fmt::format("{}: no observations in one label class", ms.response));
    } else {
      c.balanced_accuracy = score.balanced_accuracy;
      if (score.balanced_accuracy < ms.min_balanced_accuracy) {
        fail("score below threshold", fmt::format("{}: balanced accuracy {:.3f} < {}", ms.response,
                                                  score.balanced_accuracy, ms.min_balanced_accuracy));
      } else {
        details.push_back(fmt::format("{}: balanced accuracy {:.3f}", ms.response, score.balanced_accuracy));
      }
    }
  }

  for (size_t i = 0; i < details.size(); ++i) c.detail += (i ? "; " : "") + details[i];
  return c;
}

std::vector<Violation> CheckExpectations(const IncidentScenario& s) {
  std::vector<Violation> out;
  auto check = [&](const std::string& response, const std::string& path) {
    if (!FindResponse(s, response)) {
      out.push_back({"UnknownResponse", path, "no response variable named '" + response + "'"});
    }
  };
  if (s.expect.must_detect) {
    check(s.expect.must_detect->response, "expect.must_detect.response");
    if (!(s.expect.must_detect->max_latency_s >= 0)) {
      out.push_back({"InvalidExpectation", "expect.must_detect.max_latency_s", "must be nonnegative"});
    }
  }
  if (s.expect.must_score) {
    check(s.expect.must_score->response, "expect.must_score.response");
    double m = s.expect.must_score->min_balanced_accuracy;
    if (!(m >= 0 && m <= 1)) {
      out.push_back({"InvalidExpectation", "expect.must_score.min_balanced_accuracy", "must be in [0, 1]"});
    }
  }
  return out;
}

// Metric target of an override key, if the key addresses a metric.
std::optional<std::string> MetricOverrideTarget(const std::string& key, const TreatmentRegistry& registry) {
  auto [alias, target] = SplitOverrideKey(key);
  auto resolved = registry.ResolveOverride(alias);
  if (!resolved || !target || resolved->descriptor->target != TargetKind::kMetric) return std::nullopt;
  return target;
}

std::set<std::string> MetricNames(const IncidentScenario* s, const Topology& topology) {
  auto series = MetricSeriesNames(topology);
  std::set<std::string> names(series.begin(), series.end());
  if (s) {
    for (const auto& r : s->response_variables) names.insert(r.name);
  }
  return names;
}

// Alert overrides name metrics that only some scenarios define; a scenario
// sees only the overrides that apply to it.
VariantSpec ScopeVariant(const VariantSpec& variant, const IncidentScenario& s, const Topology& topology,
                         const TreatmentRegistry& registry) {
  std::set<std::string> known = MetricNames(&s, topology);
  VariantSpec out = variant;
  std::erase_if(out.overrides, [&](const auto& kv) {
    auto metric = MetricOverrideTarget(kv.first, registry);
    return metric && !known.contains(*metric);
  });
  return out;
}

}  // namespace

int SuiteReport::ExitCode() const {
  if (!errors.empty()) return 2;
  for (const auto& o : outcomes) {
    if (o.current && !o.passed) return 1;
  }
  return 0;
}

SuiteReport RunScenarioSuite(const std::vector<ScenarioSource>& scenarios, const Topology& topology,
                             const SuiteVariants& variants, int jobs, const TreatmentRegistry& registry) {
  SuiteReport report;
  report.current = variants.current;

  struct Cell {
    const IncidentScenario* scenario;
    size_t variant;
    ExperimentPlan plan;
    TimeWindow window;
  };
  std::set<std::string> known = MetricNames(nullptr, topology);
  for (const auto& src : scenarios) {
    if (!src.scenario) continue;
    for (const auto& r : src.scenario->response_variables) known.insert(r.name);
  }
  std::vector<Violation> unknown;
  for (const auto& v : variants.variants) {
    for (const auto& [key, value] : v.overrides) {
      auto metric = MetricOverrideTarget(key, registry);
      if (metric && !known.contains(*metric)) {
        unknown.push_back({"UnknownTarget", "variants." + v.name + ".overrides." + key,
                           "no scenario or metric series named '" + *metric + "'"});
      }
    }
  }
  if (!unknown.empty()) {
    report.errors.push_back({"variants", FormatViolations(unknown)});
    return report;
  }

  std::vector<Cell> cells;
  for (const auto& src : scenarios) {
    std::string name = src.scenario ? src.scenario->id : fs::path(src.file).stem().string();
    if (!src.scenario) {
      report.errors.push_back({name, src.error});
      continue;
    }
    std::vector<Violation> problems = CheckExpectations(*src.scenario);
    std::vector<Cell> mine;
    for (size_t v = 0; v < variants.variants.size() && problems.empty(); ++v) {
      ExperimentPlan plan =
          ScenarioPlan(*src.scenario, topology, ScopeVariant(variants.variants[v], *src.scenario, topology, registry));
      for (auto& viol : ValidatePlan(plan, topology, registry)) problems.push_back(std::move(viol));
      std::optional<TimeWindow> window = FaultWindow(plan, registry);
      if (problems.empty() && !window) {
        problems.push_back({"MissingWindow", "phases.fault_window_s", "scenario has no fault window"});
      }
      if (problems.empty()) mine.push_back({&*src.scenario, v, std::move(plan), *window});
    }
    if (!problems.empty()) {
      report.errors.push_back({name, FormatViolations(problems)});
      continue;
    }
    for (auto& c : mine) cells.push_back(std::move(c));
  }

  std::vector<std::vector<RunResult>> runs(cells.size());
  std::vector<std::pair<size_t, size_t>> tasks;
  for (size_t i = 0; i < cells.size(); ++i) {
    auto reps = static_cast<size_t>(std::max<int64_t>(cells[i].plan.repetitions, 1));
    runs[i].resize(reps);
    for (size_t k = 0; k < reps; ++k) tasks.emplace_back(i, k);
  }
  // Every variant replays the same seeds.
  ParallelFor(tasks.size(), jobs, [&](size_t t) {
    auto [i, k] = tasks[t];
    const Cell& c = cells[i];
    runs[i][k] = SimulateRun(c.plan, topology, c.plan.variants.front(), SplitSeed(c.scenario->seed, 0, k), registry);
  });

  for (size_t i = 0; i < cells.size(); ++i) {
    const Cell& c = cells[i];
    ScenarioOutcome o;
    o.scenario = c.scenario->id;
    o.variant = variants.variants[c.variant].name;
    o.current = o.variant == variants.current;
    o.passed = true;
    o.verdict = "pass";
    double ba_sum = 0;
    size_t ba_n = 0;
    for (const auto& run : runs[i]) {
      Check ch = CheckRun(*c.scenario, run, c.window);
      if (ch.latency_s) o.detection_latency_s = std::max(o.detection_latency_s.value_or(0.0), *ch.latency_s);
      if (ch.balanced_accuracy) {
        ba_sum += *ch.balanced_accuracy;
        ++ba_n;
      }
      if (!ch.passed && o.passed) {
        o.passed = false;
        o.verdict = ch.verdict;
        o.detail = ch.detail;
      } else if (o.passed) {
        o.detail = ch.detail;
      }
    }
    if (ba_n) o.balanced_accuracy = ba_sum / static_cast<double>(ba_n);
    report.outcomes.push_back(std::move(o));
  }
  return report;
}

namespace {

std::string XmlEscape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

std::string SuiteJUnitXml(const SuiteReport& report) {
  size_t failures = 0;
  for (const auto& o : report.outcomes) failures += (o.current && !o.passed) ? 1 : 0;
  std::string xml = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  xml += fmt::format("<testsuite name=\"oxlab-scenarios\" tests=\"{}\" failures=\"{}\" errors=\"{}\">\n",
                     report.outcomes.size() + report.errors.size(), failures, report.errors.size());
  for (const auto& e : report.errors) {
    xml += fmt::format("  <testcase classname=\"{}\" name=\"load\">\n", XmlEscape(e.scenario));
    xml += fmt::format("    <error message=\"configuration error\">{}</error>\n", XmlEscape(e.message));
    xml += "  </testcase>\n";
  }
  for (const auto& o : report.outcomes) {
    std::string name = o.current ? o.variant + " (current)" : o.variant;
    xml += fmt::format("  <testcase classname=\"{}\" name=\"{}\">\n", XmlEscape(o.scenario), XmlEscape(name));
    if (!o.passed && o.current) {
      xml += fmt::format("    <failure message=\"{}\">{}</failure>\n", XmlEscape(o.verdict), XmlEscape(o.detail));
    } else {
      xml += fmt::format("    <system-out>{}: {}</system-out>\n", XmlEscape(o.verdict), XmlEscape(o.detail));
    }
    xml += "  </testcase>\n";
  }
  xml += "</testsuite>\n";
  return xml;
}

// ---------------------------------------------------------------------------
// Recommendations

namespace {

bool Dominates(const VariantAssessment& w, const VariantAssessment& v) {
  return w.visibility >= v.visibility && w.overhead_percent <= v.overhead_percent &&
         (w.visibility > v.visibility || w.overhead_percent < v.overhead_percent);
}

}  // namespace

Recommendation Recommend(const std::vector<VariantAssessment>& variants, const ErrorBudget& budget,
                         double theta) {
  Recommendation rec;
  rec.budget_pressure = budget.remaining_fraction() < theta;

  constexpr double kInf = std::numeric_limits<double>::infinity();
  auto before = [&](const VariantAssessment& a, const VariantAssessment& b) {
    if (rec.budget_pressure) {
      return std::tuple(a.detection_latency_s.value_or(kInf), a.overhead_percent, -a.visibility, a.name) <
             std::tuple(b.detection_latency_s.value_or(kInf), b.overhead_percent, -b.visibility, b.name);
    }
    if (a.detected != b.detected) return a.detected;
    if (a.detected) {
      return std::tuple(a.overhead_percent, -a.visibility, a.name) <
             std::tuple(b.overhead_percent, -b.visibility, b.name);
    }
    return std::tuple(-a.visibility, a.overhead_percent, a.name) <
           std::tuple(-b.visibility, b.overhead_percent, b.name);
  };

  // Peel Pareto fronts so a dominated variant never ranks above one that
  // dominates it.
  std::vector<const VariantAssessment*> rest;
  for (const auto& v : variants) rest.push_back(&v);
  for (int front = 0; !rest.empty(); ++front) {
    std::vector<const VariantAssessment*> layer, next;
    for (const auto* v : rest) {
      bool dominated = std::any_of(rest.begin(), rest.end(), [&](const auto* w) { return Dominates(*w, *v); });
      (dominated ? next : layer).push_back(v);
    }
    std::sort(layer.begin(), layer.end(), [&](const auto* a, const auto* b) { return before(*a, *b); });
    for (const auto* v : layer) rec.ranking.push_back({*v, front, {}});
    rest = std::move(next);
  }

  for (size_t i = 0; i < rec.ranking.size(); ++i) {
    auto& r = rec.ranking[i];
    if (i == 0) {
      r.verdict = "recommended";
    } else if (r.front > 0) {
      r.verdict = "dominated";
    } else if (!r.assessment.defined) {
      r.verdict = kNoDataVerdict;
    } else if (r.assessment.detected) {
      r.verdict = "viable";
    } else {
      r.verdict = "not detected";
    }
  }

  if (rec.ranking.empty()) {
    rec.rationale = "no variants to rank";
  } else if (rec.budget_pressure) {
    rec.rationale = fmt::format(
        "error budget {:.0f}% remaining (below {:.0f}%): ranked by detection latency, then overhead",
        100.0 * budget.remaining_fraction(), 100.0 * theta);
  } else {
    rec.rationale = fmt::format(
        "error budget {:.0f}% remaining: cheapest detecting variant first, then by visibility",
        100.0 * budget.remaining_fraction());
  }
  return rec;
}

}  // namespace oxlab
