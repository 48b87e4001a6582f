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

#include "oxlab/cli.h"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <stdexcept>

#include "oxlab/assurance.h"
#include "oxlab/errors.h"
#include "oxlab/plan.h"
#include "oxlab/report.h"
#include "oxlab/sue.h"

namespace oxlab::cli {

namespace fs = std::filesystem;

std::optional<std::string> SystemEnv(const std::string& name) {
  const char* v = std::getenv(name.c_str());
  if (!v) return std::nullopt;
  return std::string(v);
}

namespace {

// Thrown for usage problems detected after argument parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string UtcNow() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

uint64_t ParseSeed(const std::string& text, const std::string& what) {
  try {
    size_t pos = 0;
    if (text.empty() || text[0] == '-') throw std::invalid_argument(text);
    uint64_t v = std::stoull(text, &pos, 0);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::logic_error&) {
    throw UsageError(fmt::format("{} must be a nonnegative integer, got '{}'", what, text));
  }
}

struct RunOptions {
  std::string plan;
  std::string out = "oxlab-out";
  std::optional<uint64_t> seed;
  std::optional<int64_t> repetitions;
  int jobs = 1;
  std::string budget;
};

int CmdRun(const RunOptions& o, std::ostream& out, std::ostream& err, const EnvLookup& env) {
  LoadedPlan loaded = LoadPlanFile(o.plan);
  ExperimentPlan& plan = loaded.plan;
  if (auto s = env("OXLAB_SEED"); s && !s->empty()) plan.base_seed = ParseSeed(*s, "OXLAB_SEED");
  if (o.seed) plan.base_seed = *o.seed;
  if (o.repetitions) plan.repetitions = *o.repetitions;
  if (o.jobs < 1) throw UsageError("--jobs must be at least 1");

  auto violations = ValidatePlan(plan, loaded.topology);
  if (!violations.empty()) {
    err << "error: plan '" << o.plan << "' is invalid:\n" << FormatViolations(violations);
    return kExitConfig;
  }

  SloPolicy policy;
  std::string budget_source = "default";
  if (!o.budget.empty()) {
    auto ledger = LoadBudgetLedger(o.budget);
    if (!ledger) throw ConfigError("Io", o.budget, "budget ledger '" + o.budget + "' does not exist");
    policy = ledger->policy;
    budget_source = o.budget;
  }
  ErrorBudget budget = ComputeErrorBudget(policy);

  std::vector<RunResult> runs = RunAll(plan, loaded.topology, o.jobs);
  ExperimentReport report = Assess(plan, runs, budget);
  std::map<std::string, std::string> metadata{
      {"created_at", UtcNow()},
      {"plan_path", loaded.plan_path},
      {"jobs", std::to_string(o.jobs)},
      {"budget_ledger", budget_source},
  };
  WriteExperimentOutput(o.out, plan, runs, report, metadata);
  out << SummaryTable(report);
  out << "\nwrote " << (fs::path(o.out) / "assessment.json").string() << "\n";
  return kExitOk;
}

int CmdCompare(const std::vector<std::string>& paths, std::ostream& out) {
  if (paths.size() < 2) throw UsageError("compare needs at least two assessments");
  out << ComparisonTable(CompareAssessments(paths));
  return kExitOk;
}

struct SuiteOptions {
  std::string dir;
  std::string topology;
  std::string variants;
  std::string junit;
  int jobs = 1;
};

int CmdSuite(const SuiteOptions& o, std::ostream& out, std::ostream& err) {
  if (o.jobs < 1) throw UsageError("--jobs must be at least 1");
  Topology topology = LoadTopologyFile(o.topology);
  SuiteVariants variants = ParseSuiteVariants(ReadTextFile(o.variants));
  auto scenarios = LoadScenarioDir(o.dir);
  SuiteReport report = RunScenarioSuite(scenarios, topology, variants, o.jobs);

  for (const auto& e : report.errors) err << "error: scenario " << e.scenario << ":\n" << e.message << "\n";
  size_t failures = 0;
  for (const auto& r : report.outcomes) {
    if (r.current && !r.passed) ++failures;
    out << fmt::format("{:<4} {} [{}{}]: {}", r.passed ? "ok" : "FAIL", r.scenario, r.variant,
                       r.current ? ", current" : "", r.verdict);
    if (!r.detail.empty()) out << " (" << r.detail << ")";
    out << "\n";
  }
  out << fmt::format("{} scenario(s), {} check(s), {} current-variant failure(s), {} error(s)\n",
                     scenarios.size(), report.outcomes.size(), failures, report.errors.size());
  if (!o.junit.empty()) WriteTextFile(o.junit, SuiteJUnitXml(report));
  return report.ExitCode();
}

void PrintBudget(std::ostream& out, const BudgetLedger& ledger) {
  ErrorBudget b = ComputeErrorBudget(ledger.policy);
  out << fmt::format("target     {}%\n", ledger.policy.availability_target * 100.0);
  out << fmt::format("period     {} days\n", ledger.policy.period_days);
  out << fmt::format("total      {:.1f} min\n", b.total_minutes());
  out << fmt::format("consumed   {:.1f} min\n", ledger.policy.consumed_minutes());
  out << fmt::format("remaining  {:.1f} min ({:.1f}%)\n", b.remaining_minutes(), 100.0 * b.remaining_fraction());
  out << fmt::format("incidents  {}\n", ledger.history.size());
}

}  // namespace

int Main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const EnvLookup& env) {
  CLI::App app{"Observability experiments on a simulated microservice system.", "oxlab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kEngineVersion);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment plan and assess its variants");
  run_cmd->add_option("plan", run.plan, "Plan file")->required();
  run_cmd->add_option("-o,--out", run.out, "Output directory")->capture_default_str();
  run_cmd->add_option("--seed", run.seed, "Base seed (overrides OXLAB_SEED and the plan)");
  run_cmd->add_option("--repetitions", run.repetitions, "Repetitions per variant")->check(CLI::PositiveNumber);
  run_cmd->add_option("-j,--jobs", run.jobs, "Worker threads")->capture_default_str();
  run_cmd->add_option("--budget", run.budget, "Error budget ledger (budget.json)");

  std::vector<std::string> compare_paths;
  auto* compare_cmd = app.add_subcommand("compare", "Compare saved assessments");
  compare_cmd->add_option("assessments", compare_paths, "assessment.json files or run output directories");

  SuiteOptions suite;
  auto* suite_cmd = app.add_subcommand("suite", "Replay postmortem scenarios against instrumentation variants");
  suite_cmd->add_option("dir", suite.dir, "Scenario directory")->required();
  suite_cmd->add_option("--topology", suite.topology, "Topology file")->required();
  suite_cmd->add_option("--variants", suite.variants, "Variant config file")->required();
  suite_cmd->add_option("--junit", suite.junit, "Write JUnit XML here");
  suite_cmd->add_option("-j,--jobs", suite.jobs, "Worker threads")->capture_default_str();

  std::string ledger = "budget.json";
  auto* budget_cmd = app.add_subcommand("budget", "Inspect or update the error budget ledger");
  budget_cmd->require_subcommand(1);
  budget_cmd->add_option("--ledger", ledger, "Ledger file")->capture_default_str();
  budget_cmd->fallthrough();
  auto* show_cmd = budget_cmd->add_subcommand("show", "Print the remaining budget");
  double minutes = 0;
  std::string note;
  auto* record_cmd = budget_cmd->add_subcommand("record", "Record incident downtime");
  record_cmd->add_option("minutes", minutes, "Downtime in minutes")->required();
  record_cmd->add_option("--note", note, "Free-form note");
  double target = 0;
  int64_t days = 0;
  auto* set_cmd = budget_cmd->add_subcommand("set", "Set the availability target and period");
  set_cmd->add_option("target", target, "Availability target in (0, 1]")->required();
  set_cmd->add_option("days", days, "Period in days")->required();

  auto* schema_cmd = app.add_subcommand("schema", "Print the plan JSON schema");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  try {
    if (*run_cmd) return CmdRun(run, out, err, env);
    if (*compare_cmd) return CmdCompare(compare_paths, out);
    if (*suite_cmd) return CmdSuite(suite, out, err);
    if (*schema_cmd) {
      out << PlanJsonSchema();
      return kExitOk;
    }
    if (*show_cmd) {
      BudgetLedger l = LoadBudgetLedger(ledger).value_or(BudgetLedger{});
      PrintBudget(out, l);
      return kExitOk;
    }
    if (*record_cmd) {
      if (!(minutes >= 0)) throw UsageError(fmt::format("downtime must be nonnegative, got {}", minutes));
      PrintBudget(out, AppendIncident(ledger, minutes, note));
      return kExitOk;
    }
    if (*set_cmd) {
      PrintBudget(out, SetPolicy(ledger, target, days));
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitConfig;
}

}  // namespace oxlab::cli
