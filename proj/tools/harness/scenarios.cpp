// Copyright 2026 The hermflow Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "harness/scenarios.hpp"

#include <algorithm>

namespace hermflow::harness {

const std::vector<ScenarioInfo>& scenarios() {
  static const std::vector<ScenarioInfo> table = {
      {"gaussian", "Brownian translation flow, b = 0, sigma = 1", true},
      {"ou", "Ornstein-Uhlenbeck, b = -lambda x, sigma = s", true},
      {"trig", "multiplicative noise, sigma = 1 + a sin x, optional drift", false},
  };
  return table;
}

bool is_registered(const std::string& name) {
  const auto& s = scenarios();
  return std::any_of(s.begin(), s.end(), [&](const ScenarioInfo& i) { return i.name == name; });
}

const std::vector<std::string>& identities() {
  static const std::vector<std::string> names = {
      "strong",  "mild",    "mild-pathwise", "martingale", "generator", "monotonicity",
      "support", "tv",      "norms",         "flow",       "all"};
  return names;
}

bool is_identity(const std::string& name) {
  const auto& s = identities();
  return std::find(s.begin(), s.end(), name) != s.end();
}

SdeModel build_model(const ScenarioConfig& cfg) {
  if (cfg.model == "gaussian") return gaussian_model(1);
  if (cfg.model == "ou") return ou_model(cfg.lambda, cfg.sigma);
  if (cfg.model == "trig") return trig_model(cfg.trig_amplitude, cfg.trig_drift);
  throw ConfigError("field 'scenario.model': unknown scenario '" + cfg.model + "'");
}

InitialCondition build_initial(const ScenarioConfig& cfg) {
  if (cfg.psi_kind == "delta") return delta_initial(point1(cfg.psi_point));
  if (cfg.psi_kind == "derivative-delta") {
    return derivative_delta_initial(point1(cfg.psi_point), MultiIndex{1});
  }
  return bump_initial(cfg.psi_amplitude, cfg.psi_center, cfg.psi_width);
}

TestFunction build_test_function(const ScenarioConfig& cfg) {
  if (cfg.phi == "h0") return hermite_test_function(MultiIndex{0});
  if (cfg.phi == "hermite") return hermite_test_function(MultiIndex{cfg.phi_order});
  if (cfg.phi == "linear") return linear_function(point1(cfg.phi_slope), cfg.phi_offset);
  return bump_function(cfg.phi_amplitude, cfg.phi_center, cfg.phi_width);
}

}  // namespace hermflow::harness
