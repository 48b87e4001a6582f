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

#include <string>

#include "json.hpp"
#include "oxlab/report.h"

namespace oxlab {

namespace {

using Json = nlohmann::ordered_json;

Json Obj(Json properties, std::vector<std::string> required = {}) {
  Json j;
  j["type"] = "object";
  j["properties"] = std::move(properties);
  if (!required.empty()) j["required"] = required;
  j["additionalProperties"] = false;
  return j;
}

Json Type(const char* t) { return Json{{"type", t}}; }

Json Window() {
  return Json{{"type", "array"}, {"items", Type("integer")}, {"minItems", 2}, {"maxItems", 2}};
}

Json OneKey(const char* key, Json value) { return Obj(Json{{key, std::move(value)}}, {key}); }

Json DistributionSchema() {
  Json range = Obj(Json{{"lo", Type("number")}, {"hi", Type("number")}}, {"lo", "hi"});
  Json lognormal = Obj(Json{{"mu", Type("number")}, {"sigma", Type("number")}}, {"mu", "sigma"});
  return Json{{"oneOf", Json::array({Type("number"), OneKey("constant", Type("number")),
                                      OneKey("uniform", range), OneKey("lognormal", lognormal)})}};
}

Json TopologySchema() {
  Json call = Obj(Json{{"service", Type("string")},
                       {"count", Json{{"type", "integer"}, {"minimum", 1}}},
                       {"sequential", Type("boolean")}},
                  {"service"});
  Json cost = Obj(Json{{"base_per_second", Type("number")},
                       {"per_request", Type("number")},
                       {"per_span_exported", Type("number")},
                       {"per_metric_sample", Type("number")}});
  Json service = Obj(Json{{"name", Type("string")},
                          {"latency_ms", Json{{"$ref", "#/$defs/distribution"}}},
                          {"calls", Json{{"type", "array"}, {"items", call}}},
                          {"cost", cost}},
                     {"name", "latency_ms"});
  return Obj(Json{{"entry", Type("string")},
                  {"services", Json{{"type", "array"}, {"items", service}, {"minItems", 1}}}},
             {"entry", "services"});
}

}  // namespace

std::string PlanJsonSchema(const TreatmentRegistry& registry) {
  Json profile = Json{{"oneOf", Json::array({
      OneKey("constant", Obj(Json{{"users", Type("integer")}}, {"users"})),
      OneKey("ramp", Obj(Json{{"from", Type("integer")}, {"to", Type("integer")}}, {"from", "to"})),
      OneKey("spike", Obj(Json{{"base", Type("integer")}, {"peak", Type("integer")}, {"window_s", Window()}},
                          {"base", "peak", "window_s"})),
  })}};
  Json workload = Obj(Json{{"profile", profile}, {"think_time_ms", Json{{"$ref", "#/$defs/distribution"}}}},
                      {"profile"});
  Json phases = Obj(Json{{"duration_s", Type("integer")},
                         {"ramp_up_s", Type("integer")},
                         {"cool_down_s", Type("integer")},
                         {"fault_window_s", Window()}},
                    {"duration_s"});
  Json param_value = Json{{"type", Json::array({"number", "boolean", "string"})}};
  Json treatment = Obj(Json{{"name", Type("string")},
                            {"type", Json{{"enum", registry.Types()}}},
                            {"target", Type("string")},
                            {"window_s", Window()},
                            {"params", Json{{"type", "object"}, {"additionalProperties", param_value}}}},
                       {"name", "type"});
  Json source = Json{{"oneOf", Json::array({OneKey("trace_duration", Type("string")),
                                             OneKey("metric", Type("string"))})}};
  Json response = Obj(Json{{"name", Type("string")},
                           {"source", source},
                           {"window_s", Json{{"type", "integer"}, {"minimum", 0}}}},
                      {"name", "source"});
  Json variant = Obj(Json{{"name", Type("string")},
                          {"overrides", Json{{"type", "object"}, {"additionalProperties", param_value}}}},
                     {"name"});
  Json analysis = Obj(Json{{"alpha", Type("number")},
                           {"beta", Type("number")},
                           {"bin_width_s", Type("integer")},
                           {"budget_pressure", Type("number")}});

  Json schema;
  schema["$schema"] = "https://json-schema.org/draft/2020-12/schema";
  schema["title"] = "oxlab experiment plan";
  schema["type"] = "object";
  schema["properties"] = Json{
      {"version", Json{{"const", 1}}},
      {"id", Type("string")},
      {"topology", Json{{"oneOf", Json::array({Type("string"), Json{{"$ref", "#/$defs/topology"}}})}}},
      {"workload", workload},
      {"phases", phases},
      {"treatments", Json{{"type", "array"}, {"items", treatment}}},
      {"response_variables", Json{{"type", "array"}, {"items", response}}},
      {"variants", Json{{"type", "array"}, {"items", variant}}},
      {"baseline", Type("string")},
      {"repetitions", Json{{"type", "integer"}, {"minimum", 1}}},
      {"base_seed", Json{{"type", "integer"}, {"minimum", 0}}},
      {"analysis", analysis},
  };
  schema["required"] = Json::array({"version", "id", "topology", "phases"});
  schema["additionalProperties"] = false;
  schema["$defs"] = Json{{"distribution", DistributionSchema()}, {"topology", TopologySchema()}};
  return schema.dump(2) + "\n";
}

}  // namespace oxlab
