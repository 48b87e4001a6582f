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

// YAML readers for plan fragments, shared with the scenario parser.

#include <yaml-cpp/yaml.h>

#include <string>

#include "oxlab/plan.h"

namespace oxlab::plan_io {

TimeWindow ReadWindow(const YAML::Node& node, const std::string& path);
void EmitWindow(YAML::Emitter& out, const TimeWindow& w);
WorkloadSpec ReadWorkload(const YAML::Node& node, const std::string& path);
PhaseSchedule ReadPhases(const YAML::Node& node, const std::string& path);
TreatmentSpec ReadTreatment(const YAML::Node& node, const std::string& path);
ResponseVariableSpec ReadResponse(const YAML::Node& node, const std::string& path);
AnalysisConfig ReadAnalysis(const YAML::Node& node, const std::string& path);
void EmitParamMap(YAML::Emitter& out, const ParamMap& params);

}  // namespace oxlab::plan_io
