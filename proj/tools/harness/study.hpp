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

#include <iosfwd>
#include <string>
#include <vector>

#include "harness/config.hpp"

namespace hermflow::harness {

struct StudyLevel {
  double dt = 0.0;
  double rms = 0.0;
};

struct StudyResult {
  std::string scenario;
  std::uint64_t seed = 0;
  int paths = 0;
  double horizon = 0.0;
  std::vector<StudyLevel> levels;  // coarsest first
  double slope = 0.0;              // least squares in log-log
  double expected_slope = 0.0;     // 0.8 additive noise, 0.4 otherwise
  bool pass = false;

  std::string to_json() const;
  void write_csv(std::ostream& out) const;
};

/// Strong-residual convergence at the terminal time. Every level reuses the
/// finest Brownian path, coarsened, so the slope measures discretization and
/// not sampling differences. Needs >= 3 levels on a geometric ladder whose
/// ratios are integers; throws ConfigError otherwise.
StudyResult convergence_study(const ScenarioConfig& cfg, std::vector<double> dts);

}  // namespace hermflow::harness
