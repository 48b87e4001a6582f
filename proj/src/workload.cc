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

#include "oxlab/workload.h"

#include <algorithm>

namespace oxlab {

namespace {
constexpr int64_t kMicros = 1'000'000;
}

UserPopulation::UserPopulation(const LoadProfile& profile, int64_t ramp_up_us)
    : profile_(profile), ramp_up_us_(ramp_up_us) {}

int64_t UserPopulation::MaxUsers() const {
  if (const auto* c = std::get_if<ConstantLoad>(&profile_)) return c->users;
  if (const auto* r = std::get_if<RampLoad>(&profile_)) return std::max(r->from, r->to);
  const auto& s = std::get<SpikeLoad>(profile_);
  return std::max(s.base, s.peak);
}

int64_t UserPopulation::ActiveUsers(int64_t t_us) const {
  if (const auto* c = std::get_if<ConstantLoad>(&profile_)) return c->users;
  if (const auto* r = std::get_if<RampLoad>(&profile_)) {
    if (ramp_up_us_ <= 0 || t_us >= ramp_up_us_) return r->to;
    if (t_us <= 0) return r->from;
    // Truncation toward zero keeps the count between from and to in both directions.
    return r->from + (r->to - r->from) * t_us / ramp_up_us_;
  }
  const auto& s = std::get<SpikeLoad>(profile_);
  bool inside = t_us >= s.start_s * kMicros && t_us < s.end_s * kMicros;
  return inside ? s.peak : s.base;
}

std::optional<int64_t> UserPopulation::NextActive(int64_t user, int64_t t_us) const {
  if (user < ActiveUsers(t_us)) return t_us;
  if (const auto* r = std::get_if<RampLoad>(&profile_)) {
    if (r->to <= r->from || user >= r->to || t_us >= ramp_up_us_) return std::nullopt;
    int64_t span = r->to - r->from;
    int64_t need = (user + 1 - r->from) * ramp_up_us_;
    int64_t t = (need + span - 1) / span;
    return std::max(t_us, std::min(t, ramp_up_us_));
  }
  if (const auto* s = std::get_if<SpikeLoad>(&profile_)) {
    int64_t start = s->start_s * kMicros;
    int64_t end = s->end_s * kMicros;
    if (t_us < start && user < s->peak) return start;
    if (t_us >= start && t_us < end && user < s->base) return end;
  }
  return std::nullopt;
}

std::string CheckWorkload(const WorkloadSpec& workload) {
  if (auto msg = workload.think_time.Check(); !msg.empty()) return "think_time_ms: " + msg;
  if (const auto* c = std::get_if<ConstantLoad>(&workload.profile)) {
    if (c->users < 0) return "user count must be >= 0";
  } else if (const auto* r = std::get_if<RampLoad>(&workload.profile)) {
    if (r->from < 0 || r->to < 0) return "user counts must be >= 0";
  } else {
    const auto& s = std::get<SpikeLoad>(workload.profile);
    if (s.base < 0 || s.peak < 0) return "user counts must be >= 0";
    if (s.start_s < 0 || s.end_s <= s.start_s) return "spike window must satisfy 0 <= start < end";
  }
  return {};
}

}  // namespace oxlab
