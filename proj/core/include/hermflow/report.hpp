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
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace hermflow {

struct SeriesPoint {
  double t = 0.0;
  double residual = 0.0;
  double sigma = 0.0;  // statistical error bar (0 for deterministic checks)
  double bound = 0.0;  // |residual| must not exceed this
};

/// Outcome of one identity check: per-time residuals, summary, pass flag.
/// pass is true iff every |residual| <= bound; finalize() enforces that.
struct VerificationReport {
  std::string identity;
  std::string scenario;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, double>> params;
  std::vector<SeriesPoint> series;
  std::vector<std::pair<std::string, double>> diagnostics;
  std::vector<std::string> notes;  // skipped sub-checks and similar
  double rms = 0.0;
  double max_abs = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  double runtime_seconds = 0.0;

  /// Recomputes rms, max_abs and pass from `series` and any extra failure.
  void finalize(bool extra_ok = true);

  void add_param(std::string key, double value) { params.emplace_back(std::move(key), value); }
  void add_diagnostic(std::string key, double value) {
    diagnostics.emplace_back(std::move(key), value);
  }
  double diagnostic(const std::string& key) const;

  /// {identity, scenario, seed, params, series:[{t, residual, sigma, bound}],
  ///  summary:{rms, max}, pass, diagnostics, notes[, timing]}.
  /// The timing block is the only non-reproducible field.
  std::string to_json(bool include_timing = true) const;
  void write_csv(std::ostream& out) const;
};

}  // namespace hermflow
