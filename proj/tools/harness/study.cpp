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

#include "harness/study.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <json.hpp>

#include "hermflow/flow.hpp"
#include "hermflow/parallel.hpp"
#include "hermflow/residuals.hpp"
#include "hermflow/rng.hpp"
#include "harness/scenarios.hpp"

namespace hermflow::harness {

namespace {

int integer_ratio(double coarse, double fine) {
  const double r = coarse / fine;
  const double rounded = std::round(r);
  if (rounded < 2.0 || std::abs(r - rounded) > 1e-9 * r) {
    throw ConfigError("field 'study.dts': levels must differ by integer factors >= 2");
  }
  return static_cast<int>(rounded);
}

}  // namespace

StudyResult convergence_study(const ScenarioConfig& cfg, std::vector<double> dts) {
  if (dts.size() < 3) throw ConfigError("field 'study.dts': at least 3 levels are needed");
  std::sort(dts.begin(), dts.end(), std::greater<>());
  const double finest = dts.back();
  const int ratio = integer_ratio(dts[0], dts[1]);
  for (std::size_t l = 1; l < dts.size(); ++l) {
    if (integer_ratio(dts[l - 1], dts[l]) != ratio) {
      throw ConfigError("field 'study.dts': levels must form a geometric ladder");
    }
  }
  const double horizon = cfg.horizon();
  int steps = 0;
  try {
    for (double dt : dts) step_count(horizon, dt);
    steps = step_count(horizon, finest);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("field 'numerics.steps': ") + e.what());
  }

  const SdeModel model = build_model(cfg);
  const InitialCondition psi = build_initial(cfg);
  const TestFunction phi = build_test_function(cfg);
  const std::uint64_t seed = cfg.required_seed();
  const std::size_t paths = static_cast<std::size_t>(cfg.paths);
  const std::size_t levels = dts.size();

  std::vector<double> squares(paths * levels);
  parallel_for(paths, [&](std::size_t p) {
    const BrownianPath fine =
        BrownianPath::generate(model.noise_dim, finest, steps, seed, derive_stream(seed, "study", p));
    for (std::size_t l = 0; l < levels; ++l) {
      const BrownianPath path =
          l + 1 == levels ? fine : fine.coarsen(static_cast<int>(std::lround(dts[l] / finest)));
      const FlowEnsemble e = simulate_flow(model, psi.ensemble_nodes(), path, p);
      const double r = strong_residual(psi, phi, e).series.back().residual;
      squares[p * levels + l] = r * r;
    }
  });

  StudyResult out;
  out.scenario = cfg.model;
  out.seed = seed;
  out.paths = cfg.paths;
  out.horizon = horizon;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t l = 0; l < levels; ++l) {
    double sum = 0.0;
    for (std::size_t p = 0; p < paths; ++p) sum += squares[p * levels + l];
    const double rms = std::sqrt(sum / static_cast<double>(paths));
    out.levels.push_back({dts[l], rms});
    const double lx = std::log(dts[l]);
    const double ly = std::log(rms);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(levels);
  out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  out.expected_slope = model.additive_noise ? 0.8 : 0.4;
  out.pass = std::isfinite(out.slope) && out.slope >= out.expected_slope;
  return out;
}

std::string StudyResult::to_json() const {
  nlohmann::ordered_json j;
  j["study"] = "convergence";
  j["scenario"] = scenario;
  j["seed"] = seed;
  j["params"] = {{"paths", paths}, {"horizon", horizon}};
  j["levels"] = nlohmann::ordered_json::array();
  for (const auto& l : levels) j["levels"].push_back({{"dt", l.dt}, {"rms", l.rms}});
  j["slope"] = slope;
  j["expected_slope"] = expected_slope;
  j["pass"] = pass;
  return j.dump(2) + "\n";
}

void StudyResult::write_csv(std::ostream& out) const {
  const auto old = out.precision(17);
  out << "dt,rms\n";
  for (const auto& l : levels) out << l.dt << ',' << l.rms << '\n';
  out.precision(old);
}

}  // namespace hermflow::harness
