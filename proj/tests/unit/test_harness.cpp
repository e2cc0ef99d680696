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

#include <gtest/gtest.h>

#include "harness/config.hpp"
#include "harness/scenarios.hpp"
#include "harness/study.hpp"

namespace hermflow::harness {
namespace {

TEST(Config, ParsesIniSections) {
  const ScenarioConfig c = parse_config(R"(
[scenario]
model = ou
lambda = 1.5
seed = 42

[numerics]
dt = 0.002
steps = 100
exact_ou = true

[checks]
run = strong, mild

[study]
dts = 0.004, 0.002, 0.001
)",
                                        false);
  EXPECT_EQ(c.model, "ou");
  EXPECT_DOUBLE_EQ(c.lambda, 1.5);
  EXPECT_EQ(c.seed.value(), 42u);
  EXPECT_DOUBLE_EQ(c.horizon(), 0.2);
  EXPECT_TRUE(c.exact_ou);
  EXPECT_EQ(c.checks, (std::vector<std::string>{"strong", "mild"}));
  EXPECT_EQ(c.study_dts.size(), 3u);
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, ParsesJson) {
  const ScenarioConfig c = parse_config(
      R"({"scenario": {"model": "trig", "seed": 7}, "study": {"dts": [0.01, 0.005, 0.0025]}})", true);
  EXPECT_EQ(c.model, "trig");
  EXPECT_EQ(c.seed.value(), 7u);
  EXPECT_EQ(c.study_dts, (std::vector<double>{0.01, 0.005, 0.0025}));
}

TEST(Config, MissingSeedNamesTheField) {
  const ScenarioConfig c = parse_config("[scenario]\nmodel = gaussian\n", false);
  try {
    c.validate();
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("scenario.seed"), std::string::npos);
  }
}

TEST(Config, RejectsUnknownAndMalformedFields) {
  EXPECT_THROW(parse_config("[scenario]\nseeed = 1\n", false), ConfigError);
  EXPECT_THROW(parse_config("[numerics]\ndt = fast\n", false), ConfigError);
  EXPECT_THROW(parse_config("[scenario]\nseed = -3\n", false), ConfigError);
  ScenarioConfig c = default_config("gaussian");
  c.seed = 1;
  c.dt = -1.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c.dt = 1e-3;
  c.model = "heston";
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Scenarios, RegistryIsClosed) {
  EXPECT_EQ(scenarios().size(), 3u);
  EXPECT_TRUE(is_registered("ou"));
  EXPECT_FALSE(is_registered("custom"));
  EXPECT_TRUE(is_identity("tv"));
  EXPECT_FALSE(is_identity("weak"));
  ScenarioConfig c = default_config("trig");
  EXPECT_FALSE(build_model(c).additive_noise);
  c.model = "ou";
  EXPECT_EQ(build_model(c).family, ModelFamily::OrnsteinUhlenbeck);
}

TEST(Study, RejectsBadLadders) {
  ScenarioConfig c = default_config("gaussian");
  c.seed = 1;
  c.paths = 4;
  EXPECT_THROW(convergence_study(c, {4e-3, 2e-3}), ConfigError);
  EXPECT_THROW(convergence_study(c, {4e-3, 2e-3, 0.5e-3}), ConfigError);
  EXPECT_THROW(convergence_study(c, {3e-3, 2e-3, 1e-3}), ConfigError);
}

TEST(Study, TrigSlopeMeetsMultiplicativeOrder) {
  ScenarioConfig c = default_config("trig");
  c.seed = 20;
  c.paths = 100;
  c.dt = 1e-3;
  c.steps = 500;
  const StudyResult r = convergence_study(c, {4e-3, 2e-3, 1e-3});
  ASSERT_EQ(r.levels.size(), 3u);
  EXPECT_DOUBLE_EQ(r.levels.front().dt, 4e-3);
  EXPECT_GT(r.levels.front().rms, r.levels.back().rms);
  EXPECT_DOUBLE_EQ(r.expected_slope, 0.4);
  EXPECT_TRUE(r.pass) << r.slope;
}

}  // namespace
}  // namespace hermflow::harness
