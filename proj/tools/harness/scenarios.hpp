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

#pragma once

#include <string>
#include <vector>

#include "hermflow/initial_condition.hpp"
#include "hermflow/sde_model.hpp"
#include "hermflow/test_function.hpp"
#include "harness/config.hpp"

namespace hermflow::harness {

struct ScenarioInfo {
  std::string name;
  std::string description;
  bool additive_noise = false;
};

const std::vector<ScenarioInfo>& scenarios();
bool is_registered(const std::string& name);

/// Identity names accepted by `verify` and `[checks] run`.
const std::vector<std::string>& identities();
bool is_identity(const std::string& name);

SdeModel build_model(const ScenarioConfig& cfg);
InitialCondition build_initial(const ScenarioConfig& cfg);
TestFunction build_test_function(const ScenarioConfig& cfg);

}  // namespace hermflow::harness
