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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hermflow/parallel.hpp"
#include "harness/config.hpp"
#include "harness/runner.hpp"
#include "harness/scenarios.hpp"
#include "harness/study.hpp"

namespace hh = hermflow::harness;

namespace {

struct Overrides {
  std::string config;
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<double> dt;
  std::optional<int> steps;
  std::optional<int> paths;
  std::optional<int> inner_paths;
  std::optional<int> truncation;
};

hh::ScenarioConfig resolve(const Overrides& o) {
  hh::ScenarioConfig cfg;
  if (!o.config.empty()) {
    cfg = hh::load_config(o.config);
  } else {
    cfg = hh::default_config(o.scenario.empty() ? "gaussian" : o.scenario);
  }
  if (!o.scenario.empty()) cfg.model = o.scenario;
  if (o.seed) cfg.seed = *o.seed;
  if (o.out) cfg.out_dir = *o.out;
  if (o.dt) cfg.dt = *o.dt;
  if (o.steps) cfg.steps = *o.steps;
  if (o.paths) cfg.paths = *o.paths;
  if (o.inner_paths) cfg.inner_paths = *o.inner_paths;
  if (o.truncation) cfg.truncation = *o.truncation;
  cfg.validate();
  return cfg;
}

void add_common(CLI::App& app, Overrides& o) {
  app.add_option("--config", o.config, "INI or JSON scenario file")->check(CLI::ExistingFile);
  app.add_option("--scenario", o.scenario, "built-in scenario (gaussian, ou, trig)");
  app.add_option("--seed", o.seed, "master seed (required here or in [scenario] seed)");
  app.add_option("--out", o.out, "output directory");
  app.add_option("--dt", o.dt, "time step");
  app.add_option("--steps", o.steps, "number of steps; horizon = steps * dt");
  app.add_option("--paths", o.paths, "outer Monte Carlo paths");
  app.add_option("--inner-paths", o.inner_paths, "inner (nested) Monte Carlo paths");
  app.add_option("--truncation", o.truncation, "Hermite truncation N");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hermflow: Hermite-Sobolev flows and SPDE identity checks"};
  app.require_subcommand(1);
  Overrides o;

  auto* simulate = app.add_subcommand("simulate", "simulate a flow ensemble and write CSV output");
  add_common(*simulate, o);

  std::string identity;
  auto* verify = app.add_subcommand("verify", "run an identity check and write its report");
  verify->add_option("identity", identity,
                     "strong | mild | mild-pathwise | martingale | generator | monotonicity | "
                     "support | tv | norms | flow | all; default: [checks] run");
  add_common(*verify, o);

  std::string study_kind;
  auto* study = app.add_subcommand("study", "convergence study over the [study] dts ladder");
  study->add_option("kind", study_kind, "convergence")->required()->check(CLI::IsMember({"convergence"}));
  add_common(*study, o);

  auto* norms = app.add_subcommand("norms", "Sobolev membership table of a (derivative) delta");
  add_common(*norms, o);

  app.add_subcommand("list-scenarios", "list the built-in scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? hh::kExitPass : hh::kExitConfigError;
  }

  try {
    if (app.got_subcommand("list-scenarios")) {
      for (const auto& s : hh::scenarios()) {
        std::cout << s.name << "\t" << (s.additive_noise ? "additive" : "multiplicative") << "\t"
                  << s.description << "\n";
      }
      return hh::kExitPass;
    }
    const hh::ScenarioConfig cfg = resolve(o);
    std::clog << "threads: " << hermflow::thread_count() << "\n";
    if (simulate->parsed()) {
      hh::simulate_to(cfg, std::cout);
      return hh::kExitPass;
    }
    if (verify->parsed()) {
      if (identity.empty()) return hh::run_scenario(cfg, cfg.checks, std::cout);
      if (!hh::is_identity(identity)) throw hh::ConfigError("unknown identity '" + identity + "'");
      return hh::run_scenario(cfg, {identity}, std::cout);
    }
    if (study->parsed()) {
      const hh::StudyResult r = hh::convergence_study(cfg, cfg.study_dts);
      std::filesystem::create_directories(cfg.out_dir);
      const auto base = std::filesystem::path(cfg.out_dir) / "study_convergence";
      std::ofstream(base.string() + ".json") << r.to_json();
      std::ofstream csv(base.string() + ".csv");
      r.write_csv(csv);
      for (const auto& l : r.levels) std::cout << "dt=" << l.dt << " rms=" << l.rms << "\n";
      std::cout << (r.pass ? "PASS " : "FAIL ") << "convergence scenario=" << r.scenario
                << " slope=" << r.slope << " expected>=" << r.expected_slope << "\n";
      return r.pass ? hh::kExitPass : hh::kExitCheckFailed;
    }
    if (norms->parsed()) {
      std::filesystem::create_directories(cfg.out_dir);
      const auto path = std::filesystem::path(cfg.out_dir) / "norm_table.csv";
      std::ofstream csv(path);
      hh::emit_norm_table(cfg, csv);
      std::cout << "wrote " << path.string() << "\n";
      return hh::run_scenario(cfg, {"norms"}, std::cout);
    }
  } catch (const hh::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return hh::kExitConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return hh::kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return hh::kExitCheckFailed;
  }
  return hh::kExitConfigError;
}
