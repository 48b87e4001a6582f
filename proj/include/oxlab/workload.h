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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "oxlab/topology.h"

namespace oxlab {

struct ConstantLoad {
  int64_t users = 0;
  bool operator==(const ConstantLoad&) const = default;
};
// Linear interpolation of the active user count over the ramp-up phase.
struct RampLoad {
  int64_t from = 0;
  int64_t to = 0;
  bool operator==(const RampLoad&) const = default;
};
// `peak` users inside [start_s, end_s), `base` users otherwise.
struct SpikeLoad {
  int64_t base = 0;
  int64_t peak = 0;
  int64_t start_s = 0;
  int64_t end_s = 0;
  bool operator==(const SpikeLoad&) const = default;
};

using LoadProfile = std::variant<ConstantLoad, RampLoad, SpikeLoad>;

struct WorkloadSpec {
  LoadProfile profile = ConstantLoad{1};
  Distribution think_time = ConstantMs{0};
  bool operator==(const WorkloadSpec&) const = default;
};

// Closed-loop user population. User i is active at time t iff
// i < ActiveUsers(t); the population never exceeds MaxUsers().
class UserPopulation {
 public:
  UserPopulation(const LoadProfile& profile, int64_t ramp_up_us);

  int64_t MaxUsers() const;
  int64_t ActiveUsers(int64_t t_us) const;
  // Earliest time >= t_us at which `user` is active, or nullopt if it never
  // becomes active again.
  std::optional<int64_t> NextActive(int64_t user, int64_t t_us) const;

 private:
  LoadProfile profile_;
  int64_t ramp_up_us_;
};

std::string CheckWorkload(const WorkloadSpec& workload);

}  // namespace oxlab
