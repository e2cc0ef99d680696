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

#include "hermflow/report.hpp"
#include "harness/config.hpp"

namespace hermflow::harness {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfigError = 2;

/// Runs one identity check for the configured scenario. Throws ConfigError
/// for parameter combinations the check cannot use.
VerificationReport run_identity(const std::string& identity, const ScenarioConfig& cfg);

/// Runs each identity ("all" expands to every check), writes
/// <out>/<identity>.json and .csv, logs one line per check and returns the
/// exit code.
int run_scenario(const ScenarioConfig& cfg, const std::vector<std::string>& checks,
                 std::ostream& log);

/// Flow ensemble, Brownian increments and Z_t coefficients at the horizon.
void simulate_to(const ScenarioConfig& cfg, std::ostream& log);

/// Rows (p, n, partial_sum, slope) of the Sobolev membership profile of
/// D^gamma delta_x, n on a doubling grid; slope is the log-increment slope
/// over [n/2, n].
void emit_norm_table(const ScenarioConfig& cfg, std::ostream& csv);

/// Writes the report as JSON (no timing block, so reruns are byte
/// identical) and CSV under cfg.out_dir.
void write_report(const VerificationReport& report, const ScenarioConfig& cfg,
                  const std::string& stem);

}  // namespace hermflow::harness
