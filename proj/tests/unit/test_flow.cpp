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

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "hermflow/flow.hpp"
#include "hermflow/rng.hpp"

namespace hermflow {
namespace {

std::vector<Point> points(std::initializer_list<double> xs) {
  std::vector<Point> out;
  for (double x : xs) out.push_back(point1(x));
  return out;
}

TEST(Flow, GaussianFlowIsTranslation) {
  const FlowEnsemble e = simulate_flow(gaussian_model(1), points({-1.0, 0.5}), 0.5, 1e-3, 3, 0);
  for (int n = 0; n <= e.steps(); n += 50) {
    const double b = e.path.value(n)[0];
    EXPECT_NEAR(e.position(n, 0)[0], -1.0 + b, 1e-12);
    EXPECT_NEAR(e.position(n, 1)[0], 0.5 + b, 1e-12);
    EXPECT_EQ(e.jacobian(n, 0)(0, 0), 1.0);
  }
}

TEST(Flow, StepCountRequiresMultiple) {
  EXPECT_EQ(step_count(0.5, 1e-3), 500);
  EXPECT_EQ(step_count(0.5, 1.0 / 1024.0), 512);
  EXPECT_THROW(step_count(0.5 / 16.0, 1e-3), std::invalid_argument);
  EXPECT_THROW(step_count(-1.0, 1e-3), std::invalid_argument);
}

TEST(Flow, CoarsenedPathSumsIncrements) {
  const BrownianPath fine = BrownianPath::generate(1, 1e-3, 12, 5, 6);
  const BrownianPath coarse = fine.coarsen(4);
  ASSERT_EQ(coarse.steps, 3);
  EXPECT_DOUBLE_EQ(coarse.dt, 4e-3);
  for (int n = 0; n < 3; ++n) {
    double s = 0.0;
    for (int m = 0; m < 4; ++m) s += fine.increment(4 * n + m, 0);
    EXPECT_DOUBLE_EQ(coarse.increment(n, 0), s);
  }
  EXPECT_THROW(fine.coarsen(5), std::invalid_argument);
  const BrownianPath shifted = fine.shifted(3);
  EXPECT_EQ(shifted.steps, 9);
  EXPECT_EQ(shifted.increment(0, 0), fine.increment(3, 0));
}

TEST(Flow, CompositionResidualIsExactlyZero) {
  for (const SdeModel& m : {gaussian_model(1), ou_model(0.8, 0.5), trig_model(0.5, 0.3)}) {
    for (double x : {-1.0, 0.3, 2.0}) {
      EXPECT_EQ(flow_composition_residual(m, point1(x), 0.25, 0.25, 1e-3, 17), 0.0) << m.name;
    }
  }
}

TEST(Flow, TraceReproducesStoredRows) {
  const FlowEnsemble e = simulate_flow(trig_model(), points({0.2, 1.0}), 0.3, 1e-3, 9, 2);
  SmallMatrix j;
  const Point x = e.trace(point1(1.0), 300, j);
  EXPECT_EQ(x[0], e.position(300, 1)[0]);
  EXPECT_EQ(j(0, 0), e.jacobian(300, 1)(0, 0));
}

TEST(Flow, JacobianPositiveAndMatchesFiniteDifference) {
  const SdeModel trig = trig_model(0.5, 0.3);
  const FlowEnsemble e = simulate_flow(trig, points({0.4}), 0.5, 1e-3, 21, 0);
  for (int n = 0; n <= e.steps(); ++n) EXPECT_GT(e.jacobian(n, 0)(0, 0), 0.0);
  const double h = 1e-6;
  const double fd = (e.trace(point1(0.4 + h), 500)[0] - e.trace(point1(0.4 - h), 500)[0]) / (2 * h);
  EXPECT_NEAR(e.jacobian(500, 0)(0, 0), fd, 1e-7);
}

TEST(Flow, OuExactMomentsMatchClosedForm) {
  const double lambda = 0.8, s = 0.5, x0 = 1.2, t = 0.5;
  const SdeModel ou = ou_model(lambda, s);
  const int paths = 20000;
  double m = 0.0, v = 0.0;
  for (int p = 0; p < paths; ++p) {
    const OuExactNoise noise = OuExactNoise::generate(lambda, 1, 0.05, 10, 4, derive_stream(4, "ou", p));
    const FlowEnsemble e = simulate_ou_exact(ou, points({x0}), noise);
    const double x = e.position(10, 0)[0];
    m += x;
    v += x * x;
    if (p == 0) EXPECT_NEAR(e.jacobian(10, 0)(0, 0), std::exp(-lambda * t), 1e-14);
  }
  m /= paths;
  v = v / paths - m * m;
  const double mean = x0 * std::exp(-lambda * t);
  const double var = s * s * (1.0 - std::exp(-2.0 * lambda * t)) / (2.0 * lambda);
  EXPECT_NEAR(m, mean, 5.0 * std::sqrt(var / paths));
  EXPECT_NEAR(v, var, 5.0 * var * std::sqrt(2.0 / paths));
}

TEST(Flow, OuExactCoarseningIsConsistent) {
  const SdeModel ou = ou_model(0.8, 0.5);
  const OuExactNoise fine = OuExactNoise::generate(0.8, 1, 1e-3, 400, 8, 1);
  const OuExactNoise coarse = fine.coarsen(8);
  const FlowEnsemble a = simulate_ou_exact(ou, points({0.7}), fine);
  const FlowEnsemble b = simulate_ou_exact(ou, points({0.7}), coarse);
  for (int n = 0; n <= 50; ++n) EXPECT_NEAR(b.position(n, 0)[0], a.position(8 * n, 0)[0], 1e-13);
}

TEST(Flow, OuEulerConvergesToExactAtOrderOne) {
  const SdeModel ou = ou_model(1.0, 0.5);
  double err[3] = {0.0, 0.0, 0.0};
  for (int p = 0; p < 100; ++p) {
    const OuExactNoise noise = OuExactNoise::generate(1.0, 1, 2.5e-4, 2000, 5, derive_stream(5, "em", p));
    for (int l = 0; l < 3; ++l) {
      const OuExactNoise level = l == 2 ? noise : noise.coarsen(1 << (2 - l));
      const FlowEnsemble em = simulate_flow(ou, points({0.7}), level.path);
      const FlowEnsemble ex = simulate_ou_exact(ou, points({0.7}), level);
      err[l] += std::abs(em.position(em.steps(), 0)[0] - ex.position(ex.steps(), 0)[0]);
    }
  }
  EXPECT_NEAR(err[0] / err[1], 2.0, 0.6);
  EXPECT_NEAR(err[1] / err[2], 2.0, 0.6);
}

TEST(Flow, InverseFlowInvertsTrace) {
  const FlowEnsemble e = simulate_flow(trig_model(), points({-1.0, -0.3, 0.4, 1.0}), 0.5, 1e-3, 13, 0);
  for (double y : {e.position(500, 1)[0], 0.5 * (e.position(500, 1)[0] + e.position(500, 2)[0])}) {
    const double x = inverse_flow_1d(e, 500, y);
    EXPECT_NEAR(e.trace(point1(x), 500)[0], y, 1e-12);
  }
}

TEST(Flow, HittingTimeIncreasesWithRadius) {
  for (int p = 0; p < 10; ++p) {
    const FlowEnsemble e = simulate_flow(gaussian_model(1), points({-1.0, 1.0}), 1.0, 1e-3, 31, p);
    double prev = 0.0;
    for (double r : {1.2, 1.5, 2.0, 3.0}) {
      const double tau = hitting_time(e, 1.0, r);
      EXPECT_GE(tau, prev);
      prev = tau;
    }
  }
}

TEST(Flow, IncrementsCsvRoundTrip) {
  const BrownianPath path = BrownianPath::generate(1, 1e-3, 20, 2, 3);
  std::stringstream ss;
  write_increments_csv(ss, path);
  const BrownianPath back = read_increments_csv(ss, 1e-3);
  ASSERT_EQ(back.steps, 20);
  for (int n = 0; n < 20; ++n) EXPECT_EQ(back.increment(n, 0), path.increment(n, 0));
}

TEST(Flow, SameSeedSameEnsemble) {
  const FlowEnsemble a = simulate_flow(trig_model(), points({0.1, 0.2}), 0.1, 1e-3, 99, 4);
  const FlowEnsemble b = simulate_flow(trig_model(), points({0.1, 0.2}), 0.1, 1e-3, 99, 4);
  const FlowEnsemble c = simulate_flow(trig_model(), points({0.1, 0.2}), 0.1, 1e-3, 99, 5);
  EXPECT_EQ(a.position(100, 1)[0], b.position(100, 1)[0]);
  EXPECT_NE(a.position(100, 1)[0], c.position(100, 1)[0]);
}

}  // namespace
}  // namespace hermflow
