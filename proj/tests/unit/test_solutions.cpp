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

#include <gtest/gtest.h>

#include "hermflow/hermite.hpp"
#include "hermflow/initial_condition.hpp"
#include "hermflow/semigroup.hpp"
#include "hermflow/solutions.hpp"

namespace hermflow {
namespace {

TEST(Solutions, DeltaCoefficientsFollowTheFlow) {
  const InitialCondition psi = delta_initial(point1(0.3));
  const FlowEnsemble e = simulate_flow(trig_model(), psi.ensemble_nodes(), 0.2, 1e-3, 5, 0);
  const FlowPairing pairing(psi, e);
  const CoeffVector c = pairing.coeffs(200, 20);
  const auto h = hermite_eval_1d(20, e.position(200, 0)[0]);
  for (int k = 0; k <= 20; ++k) EXPECT_DOUBLE_EQ(c[static_cast<std::size_t>(k)], h[static_cast<std::size_t>(k)]);
}

TEST(Solutions, DerivativeDeltaUsesChainRule) {
  const InitialCondition psi = derivative_delta_initial(point1(0.3), MultiIndex{1});
  const FlowEnsemble e = simulate_flow(trig_model(), psi.ensemble_nodes(), 0.2, 1e-3, 5, 0);
  const FlowPairing pairing(psi, e);
  EXPECT_TRUE(pairing.has_derivative_atoms());
  const CoeffVector c0 = pairing.coeffs(0, 15);
  const CoeffVector ref = delta_coeffs(MultiIndex{1}, point1(0.3), 15);
  for (std::size_t k = 0; k < c0.size(); ++k) EXPECT_NEAR(c0[k], ref[k], 1e-15);
  const CoeffVector c = pairing.coeffs(200, 15);
  const double x = e.position(200, 0)[0];
  const double j = e.jacobian(200, 0)(0, 0);
  const auto d1 = hermite_derivative_1d(15, 1, x);
  for (int k = 0; k <= 15; ++k) EXPECT_NEAR(c[static_cast<std::size_t>(k)], -d1[static_cast<std::size_t>(k)] * j, 1e-14);
  EXPECT_THROW(pairing.pair(10, ScalarField([](const Point&) { return 1.0; })), std::invalid_argument);
  EXPECT_THROW(derivative_delta_initial(point1(0.0), MultiIndex{2}), std::invalid_argument);
}

TEST(Solutions, SmoothPairingStartsAtPsi) {
  const InitialCondition psi = bump_initial(1.0, 0.2, 0.8);
  const TestFunction f = hermite_test_function(MultiIndex{2});
  const FlowEnsemble e = simulate_flow(ou_model(0.8, 0.5), psi.ensemble_nodes(), 0.1, 1e-3, 1, 0);
  const FlowPairing pairing(psi, e);
  EXPECT_NEAR(pairing.pair(0, f), psi.pair(f), 1e-15);
  const double exact = composite_gauss_legendre(16, 64, -0.6, 1.0).integrate(
      [&](const Point& x) { return psi.function(x) * f(x); });
  EXPECT_NEAR(psi.pair(f), exact, 1e-9);
}

TEST(Solutions, TranslationFlowPreservesDensityAndNorm) {
  const InitialCondition psi = bump_initial(1.0, 0.0, 1.0);
  const FlowEnsemble e = simulate_flow(gaussian_model(1), psi.ensemble_nodes(), 0.3, 1e-3, 11, 0);
  const double b = e.path.value(300)[0];
  const std::vector<double> ys = {b - 0.5, b, b + 0.9, b + 1.5};
  const auto dens = z_density_1d(psi, e, 300, ys);
  for (std::size_t i = 0; i < ys.size(); ++i) {
    EXPECT_NEAR(dens[i], psi.function(point1(ys[i] - b)), 1e-12);
  }
  const double l2 = composite_gauss_legendre(16, 64, -1.0, 1.0).integrate(
      [&](const Point& x) { return psi.function(x) * psi.function(x); });
  EXPECT_NEAR(z_l2_norm_squared(psi, e, 300), l2, 1e-10);
}

TEST(Solutions, DensityIntegratesLikeThePairing) {
  const InitialCondition psi = bump_initial(1.0, 0.0, 1.0);
  const FlowEnsemble e = simulate_flow(trig_model(), psi.ensemble_nodes(), 0.3, 1e-3, 11, 0);
  const double lo = e.position(300, e.node_count() - 2)[0];
  const double hi = e.position(300, e.node_count() - 1)[0];
  const QuadratureRule rule = composite_gauss_legendre(12, 64, std::min(lo, hi), std::max(lo, hi));
  std::vector<double> ys;
  for (std::size_t q = 0; q < rule.size(); ++q) ys.push_back(rule.nodes[q]);
  const auto dens = z_density_1d(psi, e, 300, ys);
  double mass = 0.0, first = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    mass += rule.weights[q] * dens[q];
    first += rule.weights[q] * dens[q] * ys[q];
  }
  const FlowPairing pairing(psi, e);
  EXPECT_NEAR(mass, pairing.pair(300, constant_function(1, 1.0)), 1e-8);
  EXPECT_NEAR(first, pairing.pair(300, linear_function(point1(1.0), 0.0)), 1e-8);
}

TEST(Solutions, CombinationIsLinear) {
  const InitialCondition a = delta_initial(point1(0.1));
  const InitialCondition b = bump_initial(2.0, -0.3, 0.5);
  const InitialCondition c = combine(0.5, a, -1.5, b);
  const FlowEnsemble e = simulate_flow(trig_model(), c.ensemble_nodes(), 0.1, 1e-3, 2, 0);
  const TestFunction f = hermite_test_function(MultiIndex{3});
  const double lhs = FlowPairing(c, e).pair(100, f);
  const double rhs = 0.5 * FlowPairing(a, e).pair(100, f) - 1.5 * FlowPairing(b, e).pair(100, f);
  EXPECT_NEAR(lhs, rhs, 1e-14);
}

TEST(Solutions, MissingNodeIsRejected) {
  const FlowEnsemble e = simulate_flow(trig_model(), {point1(0.0)}, 0.1, 1e-3, 2, 0);
  EXPECT_THROW(FlowPairing(delta_initial(point1(0.5)), e), std::invalid_argument);
}

TEST(Solutions, MartingaleIncrementForTranslation) {
  const InitialCondition psi = delta_initial(point1(0.4));
  const FlowEnsemble e = simulate_flow(gaussian_model(1), psi.ensemble_nodes(), 0.05, 1e-3, 3, 0);
  const CoeffVector m = FlowPairing(psi, e).martingale_increment(10, 8);
  const auto d1 = hermite_derivative_1d(8, 1, e.position(10, 0)[0]);
  for (int k = 0; k <= 8; ++k) {
    EXPECT_NEAR(m[static_cast<std::size_t>(k)], d1[static_cast<std::size_t>(k)] * e.path.increment(10, 0), 1e-15);
  }
}

TEST(Solutions, ZCoefficientsOnTheTimeGrid) {
  const InitialCondition psi = delta_initial(point1(0.0));
  const FlowEnsemble e = simulate_flow(ou_model(0.8, 0.5), psi.ensemble_nodes(), 0.01, 1e-3, 3, 7);
  const DistributionPath z = z_coeffs(psi, e, 10);
  ASSERT_EQ(z.times.size(), 11u);
  EXPECT_EQ(z.ensemble_id, 7u);
  EXPECT_DOUBLE_EQ(z.times[10], 0.01);
}

TEST(Semigroup, GaussianTransitionMatchesHeatKernel) {
  // E h_0(x + B_t) = pi^{-1/4} (1+t)^{-1/2} exp(-x^2 / (2 (1+t)))
  const GaussianTransitionSemigroup sg(gaussian_model(1));
  const TestFunction h0 = hermite_test_function(MultiIndex{0});
  for (double t : {0.1, 0.5, 2.0}) {
    for (double x : {-1.0, 0.0, 0.8}) {
      const double exact = std::pow(M_PI, -0.25) / std::sqrt(1.0 + t) * std::exp(-x * x / (2.0 * (1.0 + t)));
      EXPECT_NEAR(sg.pair_value(h0, t, {point1(x)}, {1.0}, 0).value, exact, 1e-14);
    }
  }
}

TEST(Semigroup, OuTransitionMoments) {
  const double lambda = 0.8, s = 0.5, t = 0.7, x = 1.1;
  const GaussianTransitionSemigroup sg(ou_model(lambda, s));
  const TestFunction sq{1, "sq", [](const Point& y) { return y[0] * y[0]; },
                        [](const Point& y) { return point1(2.0 * y[0]); }, {}};
  const double mean = x * std::exp(-lambda * t);
  const double var = s * s * (1.0 - std::exp(-2.0 * lambda * t)) / (2.0 * lambda);
  EXPECT_NEAR(sg.pair_value(sq, t, {point1(x)}, {1.0}, 0).value, mean * mean + var, 1e-14);
  // A S_t x = s e^{-lambda t}
  const auto a = sg.pair_diffusion(linear_function(point1(1.0), 0.0), t, {point1(x)}, {1.0}, 0);
  EXPECT_NEAR(a[0].value, s * std::exp(-lambda * t), 1e-14);
}

TEST(Semigroup, MonteCarloAgreesWithClosedForm) {
  const SdeModel ou = ou_model(0.8, 0.5);
  const GaussianTransitionSemigroup exact(ou);
  const MonteCarloSemigroup mc(ou, 1e-3, 4000, 12);
  const TestFunction f = bump_function(1.0, 0.3, 1.5);
  const std::vector<Point> ys = {point1(0.1), point1(-0.4)};
  const std::vector<double> ws = {0.7, 0.3};
  const Estimate e = exact.pair_value(f, 0.3, ys, ws, 0);
  const Estimate m = mc.pair_value(f, 0.3, ys, ws, 5);
  EXPECT_GT(m.std_error, 0.0);
  EXPECT_LT(std::abs(m.value - e.value), 4.0 * m.std_error + 2e-3);
  const auto ed = exact.pair_diffusion(f, 0.3, ys, ws, 0);
  const auto md = mc.pair_diffusion(f, 0.3, ys, ws, 5);
  EXPECT_LT(std::abs(md[0].value - ed[0].value), 4.0 * md[0].std_error + 2e-3);
}

TEST(Semigroup, SampleEstimate) {
  const Estimate e = sample_estimate({1.0, 2.0, 3.0, 4.0});
  EXPECT_DOUBLE_EQ(e.value, 2.5);
  EXPECT_NEAR(e.std_error, std::sqrt(5.0 / 3.0 / 4.0), 1e-15);
}

TEST(Semigroup, DualCoefficientsOfDeltaUnderTranslation) {
  const InitialCondition psi = delta_initial(point1(0.0));
  const DualCoefficients d = dual_semigroup_coeffs(psi, gaussian_model(1), 0.5, 4, 20000, 0.05, 3);
  const double exact0 = std::pow(M_PI, -0.25) / std::sqrt(1.5);
  EXPECT_LT(std::abs(d.mean[0] - exact0), 4.0 * d.std_error[0]);
}

}  // namespace
}  // namespace hermflow
