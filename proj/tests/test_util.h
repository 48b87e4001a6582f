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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "oxlab/plan.h"
#include "oxlab/topology.h"

namespace oxlab::testing {

inline std::set<std::string> Codes(const std::vector<Violation>& v) {
  std::set<std::string> out;
  for (const auto& x : v) out.insert(x.code);
  return out;
}

inline std::string SourcePath(const std::string& rel) { return std::string(OXLAB_SOURCE_DIR) + "/" + rel; }

inline std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void Spit(const std::string& path, const std::string& text) {
  std::filesystem::create_directories(std::filesystem::path(path).parent_path());
  std::ofstream(path, std::ios::binary) << text;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "oxlab-test-XXXXXX").string();
    path_ = ::mkdtemp(tmpl.data());
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  std::string operator/(const std::string& rel) const { return path_ + "/" + rel; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// A -> B with constant latencies.
inline Topology ChainTopology(double a_ms = 10, double b_ms = 20) {
  Topology t;
  t.entry = "A";
  ServiceSpec a{"A", ConstantMs{a_ms}, {{"B", 1, true}}, {}};
  ServiceSpec b{"B", ConstantMs{b_ms}, {}, {}};
  t.services = {a, b};
  return t;
}

inline ExperimentPlan BasicPlan(const Topology& topology, int64_t duration_s = 60) {
  ExperimentPlan p;
  p.id = "test";
  p.topology = topology;
  p.phases.duration_s = duration_s;
  return p;
}

inline Topology DemoTopology() { return LoadTopologyFile(SourcePath("demo/astronomy-lite.yaml")); }

inline LoadedPlan DemoPlan() { return LoadPlanFile(SourcePath("demo/delay-experiment.yaml")); }

}  // namespace oxlab::testing
