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

#include "oxlab/report.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "oxlab/errors.h"

namespace oxlab {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

double Mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double Median(std::vector<double> v) {
  if (v.empty()) return 1.0;
  std::sort(v.begin(), v.end());
  size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

const ResponseVariableSpec* FindResponse(const ExperimentPlan& plan, const std::string& name) {
  for (const auto& r : plan.response_variables) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

// Alerts watch a response variable by name, or else a raw metric series.
// Binned observations count at the end of their bin.
std::vector<Observation> AlertSeries(const ExperimentPlan& plan, const RunResult& run, const AlertRule& rule) {
  if (const auto* rv = FindResponse(plan, rule.metric)) {
    auto series = ResponseSeries(run, *rv);
    for (auto& o : series) o.t_s += static_cast<double>(rv->window_s);
    return series;
  }
  return ExtractResponse(run, {ResponseSource::Kind::kMetricSeries, rule.metric});
}

std::string Percent(double rate) { return fmt::format("{}%", rate * 100.0); }

}  // namespace

std::string ResponseSummary::Verdict() const {
  if (!defined()) return kNoDataVerdict;
  return detected() ? "detected" : "not detected";
}

const ResponseSummary* VariantSummary::Response(const std::string& name) const {
  for (const auto& r : responses) {
    if (r.response == name) return &r;
  }
  return nullptr;
}

std::optional<double> VariantSummary::DetectionLatency() const {
  std::optional<double> best;
  for (const auto& a : alerts) {
    if (a.latency_s && (!best || *a.latency_s < *best)) best = a.latency_s;
  }
  return best;
}

ExperimentReport Assess(const ExperimentPlan& plan, const std::vector<RunResult>& runs, const ErrorBudget& budget,
                        const TreatmentRegistry& registry) {
  ExperimentReport report;
  report.plan_id = plan.id;
  report.baseline = plan.BaselineName();
  report.fault_window = FaultWindow(plan, registry);
  report.budget = budget;
  for (const auto& rv : plan.response_variables) report.response_names.push_back(rv.name);

  for (const auto& variant : plan.EffectiveVariants()) {
    VariantSummary vs;
    vs.name = variant.name;
    vs.overrides = variant.overrides;
    std::vector<double> cpu;
    for (const auto& run : runs) {
      if (run.variant != variant.name) continue;
      vs.instrumentation = run.instrumentation;
      RunDigest d;
      d.repetition = run.repetition;
      d.seed = run.seed;
      d.cpu_seconds = run.costs.total_seconds();
      d.requests = run.requests;
      d.failed_requests = run.failed_requests;
      d.exported_traces = static_cast<int64_t>(run.traces.size());
      d.exported_spans = run.exported_spans();
      for (const auto& rv : plan.response_variables) {
        VisibilityScore score;
        if (report.fault_window) {
          score = ScoreVisibility(LabelObservations(ResponseSeries(run, rv), *report.fault_window),
                                  plan.analysis.alpha, plan.analysis.beta);
        }
        d.responses.push_back({rv.name, score});
      }
      for (const auto& rule : run.instrumentation.alerts) {
        AlertOutcome a{rule, std::nullopt};
        if (report.fault_window) {
          a.latency_s = DetectionLatency(AlertSeries(plan, run, rule), rule,
                                         static_cast<double>(report.fault_window->start_s));
        }
        d.alerts.push_back(a);
      }
      cpu.push_back(d.cpu_seconds);
      vs.runs.push_back(std::move(d));
    }
    vs.cpu_seconds = Mean(cpu);

    for (size_t r = 0; r < plan.response_variables.size(); ++r) {
      ResponseSummary s;
      s.response = plan.response_variables[r].name;
      std::vector<double> ba, eff, p;
      for (const auto& d : vs.runs) {
        const VisibilityScore& sc = d.responses[r].score;
        ++s.runs;
        if (!sc.defined) continue;
        ++s.scored_runs;
        s.detected_runs += sc.detected ? 1 : 0;
        ba.push_back(sc.balanced_accuracy);
        eff.push_back(sc.effect_size);
        p.push_back(sc.p_value);
      }
      if (s.scored_runs) {
        s.balanced_accuracy = Mean(ba);
        s.effect_size = Mean(eff);
        s.p_value = Median(p);
      }
      vs.responses.push_back(std::move(s));
    }

    if (!vs.runs.empty()) {
      for (size_t a = 0; a < vs.runs.front().alerts.size(); ++a) {
        AlertOutcome out{vs.runs.front().alerts[a].rule, std::nullopt};
        std::vector<double> lat;
        for (const auto& d : vs.runs) {
          if (a < d.alerts.size() && d.alerts[a].latency_s) lat.push_back(*d.alerts[a].latency_s);
        }
        if (!lat.empty()) out.latency_s = Mean(lat);
        vs.alerts.push_back(out);
      }
    }
    report.variants.push_back(std::move(vs));
  }

  double base_cpu = 0;
  for (const auto& v : report.variants) {
    if (v.name == report.baseline) base_cpu = v.cpu_seconds;
  }
  for (auto& v : report.variants) v.overhead = Overhead(base_cpu, v.cpu_seconds);

  std::vector<VariantAssessment> assessments;
  for (const auto& v : report.variants) {
    VariantAssessment a;
    a.name = v.name;
    a.overhead_percent = v.overhead.overhead_percent;
    a.detection_latency_s = v.DetectionLatency();
    if (!v.responses.empty() && v.responses.front().defined()) {
      a.defined = true;
      a.visibility = v.responses.front().balanced_accuracy;
      a.detected = v.responses.front().detected();
    } else {
      a.defined = false;
      a.visibility = 0.5;
      a.detected = false;
    }
    assessments.push_back(a);
  }
  report.recommendation = Recommend(assessments, budget, plan.analysis.budget_pressure);
  return report;
}

namespace {

Json ScoreJson(const VisibilityScore& s) {
  Json j;
  j["defined"] = s.defined;
  j["balanced_accuracy"] = s.balanced_accuracy;
  j["threshold"] = std::isfinite(s.threshold) ? Json(s.threshold) : Json(nullptr);
  j["effect_size"] = s.effect_size;
  j["p_value"] = s.p_value;
  j["n_fault"] = s.n_fault;
  j["n_normal"] = s.n_normal;
  j["detected"] = s.detected;
  j["verdict"] = s.Verdict();
  return j;
}

Json ParamsJson(const ParamMap& params) {
  Json j = Json::object();
  for (const auto& [k, v] : params) {
    std::visit([&](const auto& x) { j[k] = x; }, v);
  }
  return j;
}

Json AlertJson(const AlertOutcome& a) {
  Json j;
  j["metric"] = a.rule.metric;
  j["threshold"] = a.rule.threshold;
  j["consecutive"] = a.rule.consecutive;
  j["detection_latency_s"] = a.latency_s ? Json(*a.latency_s) : Json(nullptr);
  return j;
}

}  // namespace

std::string AssessmentJson(const ExperimentReport& report, const std::map<std::string, std::string>& metadata) {
  Json j;
  j["engine_version"] = kEngineVersion;
  j["plan_id"] = report.plan_id;
  j["baseline"] = report.baseline;
  j["fault_window_s"] =
      report.fault_window ? Json::array({report.fault_window->start_s, report.fault_window->end_s}) : Json(nullptr);
  j["response_variables"] = report.response_names;

  Json variants = Json::array();
  for (const auto& v : report.variants) {
    Json vj;
    vj["name"] = v.name;
    vj["overrides"] = ParamsJson(v.overrides);
    vj["trace_sampling_rate"] = v.instrumentation.trace_sampling_rate;
    vj["scrape_interval_s"] = v.instrumentation.scrape_interval_s;
    vj["disabled_services"] = v.instrumentation.disabled_services;
    vj["cpu_seconds"] = v.cpu_seconds;
    vj["overhead_percent"] = v.overhead.overhead_percent;
    vj["overhead"] = v.overhead.Formatted();
    Json responses = Json::object();
    for (const auto& r : v.responses) {
      Json rj;
      rj["runs"] = r.runs;
      rj["scored_runs"] = r.scored_runs;
      rj["detected_runs"] = r.detected_runs;
      rj["balanced_accuracy"] = r.balanced_accuracy;
      rj["effect_size"] = r.effect_size;
      rj["p_value"] = r.p_value;
      rj["detected"] = r.detected();
      rj["verdict"] = r.Verdict();
      responses[r.response] = rj;
    }
    vj["responses"] = responses;
    Json alerts = Json::array();
    for (const auto& a : v.alerts) alerts.push_back(AlertJson(a));
    vj["alerts"] = alerts;
    Json runs = Json::array();
    for (const auto& d : v.runs) {
      Json dj;
      dj["repetition"] = d.repetition;
      dj["seed"] = d.seed;
      dj["cpu_seconds"] = d.cpu_seconds;
      dj["requests"] = d.requests;
      dj["failed_requests"] = d.failed_requests;
      dj["exported_traces"] = d.exported_traces;
      dj["exported_spans"] = d.exported_spans;
      Json rs = Json::object();
      for (const auto& r : d.responses) rs[r.response] = ScoreJson(r.score);
      dj["responses"] = rs;
      Json as = Json::array();
      for (const auto& a : d.alerts) as.push_back(AlertJson(a));
      dj["alerts"] = as;
      runs.push_back(dj);
    }
    vj["runs"] = runs;
    variants.push_back(vj);
  }
  j["variants"] = variants;

  Json budget;
  budget["total_minutes"] = report.budget.total_minutes();
  budget["consumed_minutes"] = TenthsToMinutes(report.budget.consumed_tenths);
  budget["remaining_minutes"] = report.budget.remaining_minutes();
  budget["remaining_fraction"] = report.budget.remaining_fraction();
  j["error_budget"] = budget;

  Json rec;
  rec["budget_pressure"] = report.recommendation.budget_pressure;
  rec["rationale"] = report.recommendation.rationale;
  Json ranking = Json::array();
  for (const auto& r : report.recommendation.ranking) {
    Json rj;
    rj["variant"] = r.assessment.name;
    rj["verdict"] = r.verdict;
    rj["front"] = r.front;
    rj["visibility"] = r.assessment.visibility;
    rj["detected"] = r.assessment.detected;
    rj["overhead_percent"] = r.assessment.overhead_percent;
    rj["detection_latency_s"] =
        r.assessment.detection_latency_s ? Json(*r.assessment.detection_latency_s) : Json(nullptr);
    ranking.push_back(rj);
  }
  rec["ranking"] = ranking;
  j["recommendation"] = rec;

  Json meta = Json::object();
  for (const auto& [k, v] : metadata) meta[k] = v;
  j["metadata"] = meta;
  return j.dump(2) + "\n";
}

std::string SummaryTable(const ExperimentReport& report) {
  std::vector<std::string> labels;
  std::vector<std::vector<std::string>> cells;
  auto row = [&](std::string label, auto&& cell) {
    labels.push_back(std::move(label));
    std::vector<std::string> r;
    for (const auto& v : report.variants) r.push_back(cell(v));
    cells.push_back(std::move(r));
  };

  std::map<std::string, size_t> rank;
  for (size_t i = 0; i < report.recommendation.ranking.size(); ++i) {
    rank[report.recommendation.ranking[i].assessment.name] = i + 1;
  }

  row("CPU time (s)", [](const VariantSummary& v) { return fmt::format("{:.2f}", v.cpu_seconds); });
  row("Overhead", [](const VariantSummary& v) { return v.overhead.Formatted(); });
  row("Sampling rate", [](const VariantSummary& v) { return Percent(v.instrumentation.trace_sampling_rate); });
  for (const auto& name : report.response_names) {
    row(name + " accuracy", [&](const VariantSummary& v) {
      const ResponseSummary* r = v.Response(name);
      return r && r->defined() ? fmt::format("{:.3f}", r->balanced_accuracy) : std::string("-");
    });
    row(name + " verdict", [&](const VariantSummary& v) {
      const ResponseSummary* r = v.Response(name);
      return r ? r->Verdict() : std::string("-");
    });
  }
  bool any_alerts = std::any_of(report.variants.begin(), report.variants.end(),
                                [](const VariantSummary& v) { return !v.alerts.empty(); });
  if (any_alerts) {
    row("Alert latency (s)", [](const VariantSummary& v) {
      auto l = v.DetectionLatency();
      return l ? fmt::format("{:.0f}", *l) : std::string("-");
    });
  }
  row("Rank", [&](const VariantSummary& v) { return fmt::format("{}", rank[v.name]); });

  // Column widths count code points so the em dash lines up.
  auto width = [](const std::string& s) {
    size_t n = 0;
    for (unsigned char c : s) n += (c & 0xC0) != 0x80;
    return n;
  };
  size_t label_w = 0;
  for (const auto& l : labels) label_w = std::max(label_w, width(l));
  std::vector<size_t> col_w;
  for (size_t c = 0; c < report.variants.size(); ++c) {
    size_t w = width(report.variants[c].name);
    for (const auto& r : cells) w = std::max(w, width(r[c]));
    col_w.push_back(w);
  }
  auto pad = [&](const std::string& s, size_t w) { return std::string(w - std::min(w, width(s)), ' ') + s; };

  std::string out = std::string(label_w, ' ');
  for (size_t c = 0; c < report.variants.size(); ++c) out += "  " + pad(report.variants[c].name, col_w[c]);
  out += "\n";
  for (size_t r = 0; r < labels.size(); ++r) {
    out += labels[r] + std::string(label_w - width(labels[r]), ' ');
    for (size_t c = 0; c < cells[r].size(); ++c) out += "  " + pad(cells[r][c], col_w[c]);
    out += "\n";
  }
  if (!report.recommendation.ranking.empty()) {
    out += fmt::format("\nRecommended: {} ({})\n", report.recommendation.ranking.front().assessment.name,
                       report.recommendation.rationale);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Files

std::string SafeFileName(const std::string& name) {
  std::string out;
  for (char c : name) {
    bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    out += ok ? c : '_';
  }
  if (out.empty() || out == "." || out == "..") out = "_" + out;
  return out;
}

std::string TracesJsonl(const RunResult& run) {
  std::string out;
  for (const auto& t : run.traces) {
    Json j;
    j["trace_id"] = fmt::format("{:016x}", t.trace_id);
    Json spans = Json::array();
    for (const auto& s : t.spans) {
      Json sj;
      sj["span_id"] = s.span_id;
      sj["parent_id"] = s.parent ? Json(*s.parent) : Json(nullptr);
      sj["service"] = s.service;
      sj["start_us"] = s.start_us;
      sj["duration_us"] = s.duration_us;
      sj["error"] = s.error;
      spans.push_back(sj);
    }
    j["spans"] = spans;
    out += j.dump() + "\n";
  }
  return out;
}

std::string MetricsCsv(const RunResult& run) {
  std::string out = "series,t,value\n";
  for (const auto& [series, points] : run.metrics) {
    for (const auto& p : points) out += fmt::format("{},{},{}\n", series, p.t_s, p.value);
  }
  return out;
}

std::string CostsJson(const RunResult& run) {
  Json j;
  j["duration_s"] = run.duration_s;
  j["total_cpu_seconds"] = run.costs.total_seconds();
  j["total_micro_cpu_seconds"] = run.costs.total();
  Json services = Json::object();
  for (const auto& [name, c] : run.costs.services) {
    Json sj;
    sj["base"] = c.base;
    sj["requests"] = c.requests;
    sj["spans"] = c.spans;
    sj["metrics"] = c.metrics;
    sj["total"] = c.total();
    auto it = run.usage.find(name);
    ServiceUsage u = it == run.usage.end() ? ServiceUsage{} : it->second;
    sj["usage"] = Json{{"spans_handled", u.spans},
                       {"spans_exported", u.exported_spans},
                       {"metric_samples", u.metric_samples},
                       {"errors", u.errors}};
    services[name] = sj;
  }
  j["services"] = services;
  return j.dump(2) + "\n";
}

std::string EventsJson(const RunResult& run) {
  Json j = Json::array();
  for (const auto& e : run.events) {
    j.push_back(Json{{"t_s", e.t_s},
                     {"treatment", e.treatment},
                     {"type", e.type},
                     {"target", e.target},
                     {"action", e.activate ? "activate" : "deactivate"}});
  }
  return j.dump(2) + "\n";
}

void WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("Io", path, "cannot write '" + path + "'");
  out << text;
  if (!out) throw ConfigError("Io", path, "cannot write '" + path + "'");
}

void WriteRunDirectory(const std::string& dir, const RunResult& run) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("Io", dir, "cannot create directory '" + dir + "'");
  WriteTextFile((fs::path(dir) / "traces.jsonl").string(), TracesJsonl(run));
  WriteTextFile((fs::path(dir) / "metrics.csv").string(), MetricsCsv(run));
  WriteTextFile((fs::path(dir) / "costs.json").string(), CostsJson(run));
  WriteTextFile((fs::path(dir) / "events.json").string(), EventsJson(run));
}

std::string PlotDataCsv(const std::vector<const RunResult*>& runs, int64_t duration_s, int64_t bin_s) {
  if (bin_s <= 0) throw std::invalid_argument("bin width must be positive");
  int64_t rows = duration_s / bin_s;
  std::vector<std::vector<double>> bins(static_cast<size_t>(std::max<int64_t>(rows, 0)));
  int64_t bin_us = bin_s * 1'000'000;
  for (const RunResult* run : runs) {
    for (const auto& t : run->traces) {
      int64_t b = t.start_us() / bin_us;
      if (b >= 0 && b < rows) bins[static_cast<size_t>(b)].push_back(static_cast<double>(t.root_duration_us()) / 1000.0);
    }
  }
  std::string out = "bin_start_s,mean_duration_ms,p95_duration_ms,n\n";
  for (int64_t b = 0; b < rows; ++b) {
    auto& v = bins[static_cast<size_t>(b)];
    if (v.empty()) {
      out += fmt::format("{},,,0\n", b * bin_s);
      continue;
    }
    std::sort(v.begin(), v.end());
    // Nearest rank.
    auto rank = static_cast<size_t>(std::ceil(0.95 * static_cast<double>(v.size())));
    double p95 = v[std::max<size_t>(rank, 1) - 1];
    out += fmt::format("{},{:.3f},{:.3f},{}\n", b * bin_s, Mean(v), p95, v.size());
  }
  return out;
}

void WriteExperimentOutput(const std::string& out_dir, const ExperimentPlan& plan, const std::vector<RunResult>& runs,
                           const ExperimentReport& report, const std::map<std::string, std::string>& metadata) {
  fs::path root(out_dir);
  std::error_code ec;
  fs::create_directories(root / "plotdata", ec);
  if (ec) throw ConfigError("Io", out_dir, "cannot create directory '" + out_dir + "'");
  WriteTextFile((root / "assessment.json").string(), AssessmentJson(report, metadata));
  for (const auto& v : plan.EffectiveVariants()) {
    std::vector<const RunResult*> mine;
    for (const auto& r : runs) {
      if (r.variant == v.name) mine.push_back(&r);
    }
    WriteTextFile((root / "plotdata" / (SafeFileName(v.name) + ".csv")).string(),
                  PlotDataCsv(mine, plan.phases.duration_s, plan.analysis.bin_width_s));
    for (const RunResult* r : mine) {
      WriteRunDirectory((root / "runs" / SafeFileName(v.name) / fmt::format("rep-{}", r->repetition)).string(), *r);
    }
  }
}

// ---------------------------------------------------------------------------
// Compare

Comparison CompareAssessments(const std::vector<std::string>& paths) {
  Comparison cmp;
  std::set<std::string> reference_names;
  std::string baseline;
  std::vector<std::vector<size_t>> rows_of(paths.size());
  for (size_t i = 0; i < paths.size(); ++i) {
    fs::path p(paths[i]);
    if (fs::is_directory(p)) p /= "assessment.json";
    Json j;
    try {
      j = Json::parse(ReadTextFile(p.string()));
    } catch (const Json::exception& e) {
      throw ConfigError("InvalidAssessment", p.string(), std::string("malformed assessment: ") + e.what());
    }
    try {
      auto base = j.at("baseline").get<std::string>();
      if (i == 0) {
        baseline = base;
      } else if (base != baseline) {
        throw ConfigError("IncompatibleAssessments", p.string(),
                          fmt::format("baseline '{}' differs from '{}'", base, baseline));
      }
      auto names = j.at("response_variables").get<std::vector<std::string>>();
      std::set<std::string> set(names.begin(), names.end());
      if (i == 0) {
        cmp.response_names = names;
        reference_names = set;
      } else if (set != reference_names) {
        throw ConfigError("IncompatibleAssessments", p.string(),
                          fmt::format("response variables [{}] differ from [{}]", fmt::join(names, ", "),
                                      fmt::join(cmp.response_names, ", ")));
      }
      for (const auto& v : j.at("variants")) {
        ComparedVariant row;
        row.experiment = paths[i];
        row.variant = v.at("name").get<std::string>();
        row.overhead_percent = v.at("overhead_percent").get<double>();
        for (const auto& name : names) {
          row.visibility[name] = v.at("responses").at(name).at("balanced_accuracy").get<double>();
        }
        rows_of[i].push_back(cmp.rows.size());
        cmp.rows.push_back(std::move(row));
      }
    } catch (const Json::exception& e) {
      throw ConfigError("InvalidAssessment", p.string(), std::string("malformed assessment: ") + e.what());
    }
  }
  cmp.reference.resize(cmp.rows.size());
  for (size_t i = 0; i < paths.size(); ++i) {
    for (size_t k = 0; k < rows_of[i].size(); ++k) {
      size_t row = rows_of[i][k];
      size_t ref = row;
      if (i > 0) {
        bool found = false;
        for (size_t r0 : rows_of[0]) {
          if (cmp.rows[r0].variant == cmp.rows[row].variant) {
            ref = r0;
            found = true;
          }
        }
        if (!found && k < rows_of[0].size()) ref = rows_of[0][k];
      }
      cmp.reference[row] = ref;
    }
  }
  return cmp;
}

std::string ComparisonTable(const Comparison& cmp) {
  std::string out;
  for (const auto& name : cmp.response_names) {
    std::vector<std::vector<std::string>> table;
    table.push_back({"experiment", "variant", "reference", "visibility", "delta", "overhead", "delta"});
    for (size_t r = 0; r < cmp.rows.size(); ++r) {
      const auto& row = cmp.rows[r];
      const auto& ref = cmp.rows[cmp.reference[r]];
      double vis = row.visibility.at(name);
      table.push_back({row.experiment, row.variant, ref.variant, fmt::format("{:.3f}", vis),
                       fmt::format("{:+.3f}", vis - ref.visibility.at(name) + 0.0),
                       fmt::format("{:+.2f}%", row.overhead_percent + 0.0),
                       fmt::format("{:+.2f} pp", row.overhead_percent - ref.overhead_percent + 0.0)});
    }
    std::vector<size_t> w(table.front().size(), 0);
    for (const auto& r : table) {
      for (size_t c = 0; c < r.size(); ++c) w[c] = std::max(w[c], r[c].size());
    }
    out += "response: " + name + "\n";
    for (const auto& r : table) {
      std::string line;
      for (size_t c = 0; c < r.size(); ++c) {
        line += c < 3 ? r[c] + std::string(w[c] - r[c].size(), ' ') : std::string(w[c] - r[c].size(), ' ') + r[c];
        if (c + 1 < r.size()) line += "  ";
      }
      out += line + "\n";
    }
    out += "\n";
  }
  return out;
}

}  // namespace oxlab
