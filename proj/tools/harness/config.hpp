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

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hermflow::harness {

/// Invalid or incomplete configuration; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything one scenario run needs. Section and key names mirror the
/// config file ("[numerics] dt = ..." or {"numerics": {"dt": ...}}).
struct ScenarioConfig {
  // [scenario]
  std::string model = "gaussian";  // gaussian | ou | trig
  double lambda = 0.8;
  double sigma = 0.5;
  double trig_amplitude = 0.5;
  double trig_drift = 0.0;
  std::optional<std::uint64_t> seed;

  // [initial]
  std::string psi_kind = "delta";  // delta | derivative-delta | bump
  double psi_point = 0.0;
  double psi_amplitude = 1.0;
  double psi_center = 0.0;
  double psi_width = 1.0;

  // [test]
  std::string phi = "h0";  // h0 | hermite | linear | bump
  int phi_order = 0;
  double phi_slope = 1.0;
  double phi_offset = 0.0;
  double phi_amplitude = 1.0;
  double phi_center = 0.0;
  double phi_width = 1.5;

  // [numerics]
  int truncation = 60;
  double dt = 1.0 / 1024.0;  // dyadic so the tv levels land on the grid
  int steps = 512;            // horizon = steps * dt
  int paths = 200;
  int inner_paths = 256;
  bool exact_ou = false;
  bool control_variate = false;

  // [tolerances]
  double allowance_c = 1.0;
  double sigma_multiplier = 3.0;
  double leakage_tolerance = 1e-4;
  double monotonicity_tolerance = 1e-5;
  double ratio_tolerance = 1e-4;

  // [support] / [monotonicity] / [tv]
  double support_radius = 1.5;
  double monotonicity_radius = 4.0;
  int monotonicity_trials = 20;
  int tv_levels = 4;
  double tv_index = 1.0;
  bool tv_control_variate = true;

  // [study]
  std::vector<double> study_dts = {4e-3, 2e-3, 1e-3};

  // [norms]
  std::vector<double> norm_indices = {0.25, 0.5, 2.0};
  int norm_terms = 4000;
  double norm_point = 0.0;
  int norm_gamma = 0;

  // [checks] run = ...
  std::vector<std::string> checks = {"strong"};

  // [output]
  std::string out_dir = "hermflow-out";

  double horizon() const { return steps * dt; }
  /// Throws ConfigError when seed is missing or a field is out of range.
  void validate() const;
  std::uint64_t required_seed() const;
};

/// Reads INI (default) or JSON (".json" extension or leading '{'). Unknown
/// sections or keys are errors so typos do not pass silently.
ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config(const std::string& text, bool json);

/// Defaults for a registry scenario without a config file.
ScenarioConfig default_config(const std::string& model);

}  // namespace hermflow::harness
