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

#include "oxlab/analysis.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace oxlab {

std::vector<Observation> ExtractResponse(const RunResult& run, const ResponseSource& source) {
  std::vector<Observation> out;
  if (source.kind == ResponseSource::Kind::kTraceDuration) {
    for (const auto& trace : run.traces) {
      if (trace.spans.empty() || trace.root().service != source.ref) continue;
      out.push_back({static_cast<double>(trace.start_us()) / 1e6,
                     static_cast<double>(trace.root_duration_us()) / 1000.0});
    }
    return out;
  }
  auto it = run.metrics.find(source.ref);
  if (it == run.metrics.end()) {
    throw ConfigError("UnknownSeries", source.ref, "metric series '" + source.ref + "' not found");
  }
  for (const auto& p : it->second) out.push_back({static_cast<double>(p.t_s), p.value});
  return out;
}

std::vector<Observation> AggregateBins(const std::vector<Observation>& series, int64_t width_s) {
  if (width_s <= 0) return series;
  std::map<int64_t, std::pair<double, int64_t>> bins;
  for (const auto& o : series) {
    auto bin = static_cast<int64_t>(std::floor(o.t_s / static_cast<double>(width_s)));
    auto& [sum, n] = bins[bin];
    sum += o.value;
    ++n;
  }
  std::vector<Observation> out;
  out.reserve(bins.size());
  for (const auto& [bin, acc] : bins) {
    out.push_back({static_cast<double>(bin * width_s), acc.first / static_cast<double>(acc.second)});
  }
  return out;
}

std::vector<Observation> ResponseSeries(const RunResult& run, const ResponseVariableSpec& spec) {
  return AggregateBins(ExtractResponse(run, spec.source), spec.window_s);
}

std::vector<LabeledObservation> LabelObservations(const std::vector<Observation>& series,
                                                  const TimeWindow& fault_window) {
  std::vector<LabeledObservation> out;
  out.reserve(series.size());
  for (const auto& o : series) {
    out.push_back({o.t_s, o.value,
                   fault_window.ContainsSeconds(o.t_s) ? Label::kFault : Label::kNormal});
  }
  return out;
}

namespace {

struct Ranked {
  std::vector<double> ranks;  // midranks, indices follow the concatenation a ++ b
  double tie_term = 0;        // sum over tie groups of t^3 - t
  bool all_tied = false;
  bool has_ties = false;
};

Ranked Rank(const std::vector<double>& a, const std::vector<double>& b) {
  size_t n = a.size() + b.size();
  std::vector<std::pair<double, size_t>> v;
  v.reserve(n);
  for (size_t i = 0; i < a.size(); ++i) v.push_back({a[i], i});
  for (size_t i = 0; i < b.size(); ++i) v.push_back({b[i], a.size() + i});
  std::sort(v.begin(), v.end());
  Ranked r;
  r.ranks.resize(n);
  for (size_t i = 0; i < n;) {
    size_t j = i;
    while (j + 1 < n && v[j + 1].first == v[i].first) ++j;
    double mid = 0.5 * static_cast<double>(i + j) + 1.0;
    for (size_t k = i; k <= j; ++k) r.ranks[v[k].second] = mid;
    auto t = static_cast<double>(j - i + 1);
    r.tie_term += t * t * t - t;
    if (j > i) r.has_ties = true;
    i = j + 1;
  }
  r.all_tied = n > 0 && v.front().first == v.back().first;
  return r;
}

uint64_t Choose(uint64_t n, uint64_t k) {
  uint64_t r = 1;
  for (uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Number of arrangements of n a's and m b's (no ties) with U_a = u.
std::vector<uint64_t> UDistribution(size_t n, size_t m) {
  // table[i][j] holds the distribution for sizes (i, j).
  std::vector<std::vector<std::vector<uint64_t>>> table(
      n + 1, std::vector<std::vector<uint64_t>>(m + 1));
  for (size_t i = 0; i <= n; ++i) {
    for (size_t j = 0; j <= m; ++j) {
      auto& d = table[i][j];
      d.assign(i * j + 1, 0);
      if (i == 0 || j == 0) {
        d[0] = 1;
        continue;
      }
      // The largest value is an a (beats all j b's) or a b (adds nothing).
      const auto& with_a = table[i - 1][j];
      for (size_t u = 0; u < with_a.size(); ++u) d[u + j] += with_a[u];
      const auto& with_b = table[i][j - 1];
      for (size_t u = 0; u < with_b.size(); ++u) d[u] += with_b[u];
    }
  }
  return table[n][m];
}

MannWhitneyResult Degenerate(size_t n, size_t m) {
  MannWhitneyResult r;
  r.u = 0.5 * static_cast<double>(n * m);
  r.effect_size = 0.5;
  r.p_greater = 1.0;
  r.p_less = 1.0;
  return r;
}

double RankSumA(const Ranked& r, size_t n) {
  double s = 0;
  for (size_t i = 0; i < n; ++i) s += r.ranks[i];
  return s;
}

}  // namespace

MannWhitneyResult MannWhitneyNormal(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("MannWhitney needs two non-empty samples");
  Ranked r = Rank(a, b);
  auto n = static_cast<double>(a.size());
  auto m = static_cast<double>(b.size());
  if (r.all_tied) return Degenerate(a.size(), b.size());
  MannWhitneyResult out;
  out.u = RankSumA(r, a.size()) - n * (n + 1) / 2;
  out.effect_size = out.u / (n * m);
  double total = n + m;
  double var = n * m / 12.0 * ((total + 1) - r.tie_term / (total * (total - 1)));
  if (!(var > 0)) return Degenerate(a.size(), b.size());
  double sd = std::sqrt(var);
  double mean = n * m / 2;
  double z_hi = (out.u - mean - 0.5) / sd;
  double z_lo = (out.u - mean + 0.5) / sd;
  out.p_greater = std::clamp(0.5 * std::erfc(z_hi / std::numbers::sqrt2), 0.0, 1.0);
  out.p_less = std::clamp(0.5 * std::erfc(-z_lo / std::numbers::sqrt2), 0.0, 1.0);
  return out;
}

MannWhitneyResult MannWhitney(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("MannWhitney needs two non-empty samples");
  size_t n = a.size();
  size_t m = b.size();
  size_t total = n + m;
  if (total > kExactMannWhitneyLimit) return MannWhitneyNormal(a, b);

  Ranked r = Rank(a, b);
  MannWhitneyResult out;
  out.exact = true;
  out.u = RankSumA(r, n) - static_cast<double>(n * (n + 1)) / 2;
  out.effect_size = out.u / static_cast<double>(n * m);
  out.exact_total = Choose(total, n);

  if (!r.has_ties) {
    auto dist = UDistribution(n, m);
    auto u = static_cast<size_t>(std::llround(out.u));
    for (size_t k = 0; k < dist.size(); ++k) {
      if (k >= u) out.exact_greater += dist[k];
      if (k <= u) out.exact_less += dist[k];
    }
  } else {
    // Midranks are multiples of 1/2, so doubled rank sums are exact integers.
    std::vector<int64_t> twice(total);
    for (size_t i = 0; i < total; ++i) twice[i] = std::llround(2 * r.ranks[i]);
    int64_t observed = 0;
    for (size_t i = 0; i < n; ++i) observed += twice[i];
    for (uint32_t mask = 0; mask < (1u << total); ++mask) {
      if (static_cast<size_t>(std::popcount(mask)) != n) continue;
      int64_t s = 0;
      for (size_t i = 0; i < total; ++i) {
        if (mask & (1u << i)) s += twice[i];
      }
      if (s >= observed) ++out.exact_greater;
      if (s <= observed) ++out.exact_less;
    }
  }
  out.p_greater = static_cast<double>(out.exact_greater) / static_cast<double>(out.exact_total);
  out.p_less = static_cast<double>(out.exact_less) / static_cast<double>(out.exact_total);
  return out;
}

std::string VisibilityScore::Verdict() const {
  if (!defined) return kNoDataVerdict;
  return detected ? "detected" : "not detected";
}

VisibilityScore ScoreVisibility(const std::vector<LabeledObservation>& labeled, double alpha,
                                double beta) {
  std::vector<double> fault;
  std::vector<double> normal;
  for (const auto& o : labeled) (o.label == Label::kFault ? fault : normal).push_back(o.value);

  VisibilityScore s;
  s.n_fault = static_cast<int64_t>(fault.size());
  s.n_normal = static_cast<int64_t>(normal.size());
  if (fault.empty() || normal.empty()) return s;
  s.defined = true;

  // Sweep thresholds from high to low; "fault" means value >= threshold.
  std::sort(fault.begin(), fault.end(), std::greater<>());
  std::sort(normal.begin(), normal.end(), std::greater<>());
  auto nf = static_cast<double>(fault.size());
  auto nn = static_cast<double>(normal.size());
  double best_j = 0;
  double best_threshold = std::numeric_limits<double>::infinity();
  size_t i = 0;
  size_t j = 0;
  while (i < fault.size() || j < normal.size()) {
    double v = std::max(i < fault.size() ? fault[i] : -std::numeric_limits<double>::infinity(),
                        j < normal.size() ? normal[j] : -std::numeric_limits<double>::infinity());
    while (i < fault.size() && fault[i] == v) ++i;
    while (j < normal.size() && normal[j] == v) ++j;
    double youden = static_cast<double>(i) / nf - static_cast<double>(j) / nn;
    if (youden > best_j) {
      best_j = youden;
      best_threshold = v;
    }
  }
  s.balanced_accuracy = 0.5 + 0.5 * best_j;
  s.threshold = best_threshold;

  MannWhitneyResult mw = MannWhitney(fault, normal);
  s.effect_size = mw.effect_size;
  s.p_value = mw.p_greater;
  s.detected = s.p_value < alpha && s.balanced_accuracy >= beta;
  return s;
}

std::optional<double> DetectionLatency(const std::vector<Observation>& series, const AlertRule& alert,
                                       double fault_start_s) {
  int64_t run = 0;
  for (const auto& o : series) {
    if (!(o.t_s > fault_start_s)) continue;
    run = o.value > alert.threshold ? run + 1 : 0;
    if (run >= std::max<int64_t>(alert.consecutive, 1)) return o.t_s - fault_start_s;
  }
  return std::nullopt;
}

std::string OverheadReport::Formatted() const {
  double rounded = std::round(overhead_percent * 100.0) / 100.0;
  if (rounded == 0.0) rounded = 0.0;  // drop negative zero
  return fmt::format("{:+.2f}%", rounded);
}

OverheadReport Overhead(double baseline_cpu, double variant_cpu) {
  if (!(baseline_cpu > 0)) throw std::invalid_argument("baseline cpu must be > 0");
  return {baseline_cpu, variant_cpu, 100.0 * (variant_cpu - baseline_cpu) / baseline_cpu};
}

}  // namespace oxlab
