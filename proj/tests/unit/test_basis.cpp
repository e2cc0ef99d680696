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
#include <numbers>

#include <gtest/gtest.h>

#include "hermflow/hermite.hpp"
#include "hermflow/multi_index.hpp"
#include "hermflow/quadrature.hpp"

namespace hermflow {
namespace {

// Reference values computed with mpmath at 40 digits from
// h_k(x) = H_k(x) e^{-x^2/2} / sqrt(2^k k! sqrt(pi)).
struct HermiteCase {
  int k;
  double x;
  double value;
};

constexpr HermiteCase kHermiteCases[] = {
    {0, 0.0, 0.75112554446494248286},   {0, 1.3, 0.3226515045649637741},
    {0, -2.7, 0.019620458198716247218}, {0, 6.0, 1.1439626827937318754e-8},
    {1, 1.3, 0.59318757377861326568},   {1, -2.7, -0.074918298828417039759},
    {5, 1.3, -0.39939146281375073457},  {5, -2.7, -0.55927482704182561131},
    {5, 6.0, 3.9688852738681932326e-5}, {20, 0.0, 0.31529120094180283317},
    {20, 1.3, -0.12812760225717423339}, {20, -2.7, -0.16275805638368510878},
    {20, 6.0, 0.49680387919821004895},  {40, 0.0, 0.2659564551523167415},
    {40, 1.3, 0.16478229185251030161},  {40, -2.7, 0.098345382099139867971},
    {40, 6.0, 0.25724324775904485663},
};

TEST(Hermite, MatchesHighPrecisionValues) {
  for (const auto& c : kHermiteCases) {
    const auto h = hermite_eval_1d(c.k, c.x);
    EXPECT_NEAR(h[static_cast<std::size_t>(c.k)], c.value, 1e-14 * (1.0 + std::abs(c.value)))
        << "k=" << c.k << " x=" << c.x;
  }
}

TEST(Hermite, DerivativesMatchHighPrecisionValues) {
  const auto d1 = hermite_derivative_1d(5, 1, 1.3);
  const auto d2 = hermite_derivative_1d(5, 2, 1.3);
  EXPECT_NEAR(d1[5], -0.70034072019932825758, 1e-14);
  EXPECT_NEAR(d2[5], 3.7183345187960193389, 1e-13);
  const HermiteJet jet = hermite_jet_1d(5, 1.3);
  EXPECT_DOUBLE_EQ(jet.first[5], d1[5]);
  EXPECT_DOUBLE_EQ(jet.second[5], d2[5]);
}

TEST(Hermite, SecondDerivativeSatisfiesOscillatorEquation) {
  // h_k'' = (x^2 - 2k - 1) h_k
  for (double x : {-3.1, -0.2, 0.0, 0.9, 4.4}) {
    const HermiteJet jet = hermite_jet_1d(30, x);
    for (int k = 0; k <= 30; ++k) {
      const auto i = static_cast<std::size_t>(k);
      EXPECT_NEAR(jet.second[i], (x * x - 2.0 * k - 1.0) * jet.value[i], 1e-12 * (1.0 + k));
    }
  }
}

TEST(Hermite, NoOverflowFarOut) {
  const auto h = hermite_eval_1d(60, 40.0);
  for (double v : h) {
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_LT(std::abs(v), 1e-100);
  }
}

TEST(Hermite, OrthonormalUnderGaussHermite60) {
  const QuadratureRule rule = gauss_hermite_rule(60);
  const int n = 40;
  double worst = 0.0;
  std::vector<std::vector<double>> values;
  for (std::size_t q = 0; q < rule.size(); ++q) values.push_back(hermite_eval_1d(n, rule.nodes[q]));
  for (int j = 0; j <= n; ++j) {
    for (int k = 0; k <= n; ++k) {
      double s = 0.0;
      for (std::size_t q = 0; q < rule.size(); ++q) {
        s += rule.lebesgue_weights[q] * values[q][static_cast<std::size_t>(j)] *
             values[q][static_cast<std::size_t>(k)];
      }
      worst = std::max(worst, std::abs(s - (j == k ? 1.0 : 0.0)));
    }
  }
  EXPECT_LT(worst, 1e-10);
}

TEST(Hermite, MultiDimensionalIsTensorProduct) {
  Point x(2);
  x << 0.4, -1.1;
  const MultiIndex k{3, 2};
  const auto hx = hermite_eval_1d(3, 0.4);
  const auto hy = hermite_eval_1d(2, -1.1);
  EXPECT_NEAR(hermite_eval_multi(k, x), hx[3] * hy[2], 1e-15);
  const MultiIndexSet set(2, 5);
  const Eigen::VectorXd v = basis_values(set, x);
  EXPECT_NEAR(v[static_cast<Eigen::Index>(set.position(k))], hx[3] * hy[2], 1e-15);
}

TEST(MultiIndex, GradedLexOrdering) {
  const MultiIndexSet set(2, 2);
  ASSERT_EQ(set.size(), 6u);
  // |k| = 0, then |k| = 1, then |k| = 2; lexicographic within a level.
  EXPECT_EQ(set[0], (MultiIndex{0, 0}));
  EXPECT_EQ(set[1], (MultiIndex{0, 1}));
  EXPECT_EQ(set[2], (MultiIndex{1, 0}));
  EXPECT_EQ(set[3], (MultiIndex{0, 2}));
  EXPECT_EQ(set[4], (MultiIndex{1, 1}));
  EXPECT_EQ(set[5], (MultiIndex{2, 0}));
  for (std::size_t i = 1; i < set.size(); ++i) EXPECT_TRUE(graded_lex_less(set[i - 1], set[i]));
}

TEST(MultiIndex, SizeIsBinomial) {
  EXPECT_EQ(basis_size(1, 60), 61u);
  EXPECT_EQ(basis_size(2, 10), 66u);   // C(12, 2)
  EXPECT_EQ(basis_size(3, 10), 286u);  // C(13, 3)
  const MultiIndexSet set(3, 6);
  for (std::size_t i = 0; i < set.size(); ++i) {
    EXPECT_EQ(set.position(set[i]), i);
    EXPECT_TRUE(set.contains(set[i]));
  }
  EXPECT_FALSE(set.contains(MultiIndex{4, 3, 0}));
}

TEST(Quadrature, GaussHermiteMoments) {
  const QuadratureRule rule = gauss_hermite_rule(20);
  double w = 0.0, x2 = 0.0, x4 = 0.0, x39 = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double x = rule.nodes[q];
    w += rule.weights[q];
    x2 += rule.weights[q] * x * x;
    x4 += rule.weights[q] * std::pow(x, 4);
    x39 += rule.weights[q] * std::pow(x, 39);
  }
  const double sqrt_pi = std::sqrt(std::numbers::pi);
  EXPECT_NEAR(w, sqrt_pi, 1e-14);
  EXPECT_NEAR(x2, sqrt_pi / 2.0, 1e-14);
  EXPECT_NEAR(x4, 3.0 * sqrt_pi / 4.0, 1e-13);
  EXPECT_NEAR(x39, 0.0, 1e-6);
}

TEST(Quadrature, LebesgueWeightsMatchClassicalWhereRepresentable) {
  const QuadratureRule rule = gauss_hermite_rule(40);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double x = rule.nodes[q];
    if (std::abs(x) > 5.0) continue;
    EXPECT_NEAR(rule.lebesgue_weights[q], rule.weights[q] * std::exp(x * x),
                1e-12 * rule.lebesgue_weights[q]);
  }
  // int e^{-x^2/2} dx = sqrt(2 pi)
  EXPECT_NEAR(rule.integrate([](const Point& p) { return std::exp(-0.5 * p[0] * p[0]); }),
              std::sqrt(2.0 * std::numbers::pi), 1e-12);
}

TEST(Quadrature, GaussLegendreExactness) {
  const QuadratureRule rule = gauss_legendre_rule(6, -1.0, 2.0);
  // int_{-1}^{2} x^11 dx = (2^12 - 1) / 12
  EXPECT_NEAR(rule.integrate([](const Point& p) { return std::pow(p[0], 11); }), 4095.0 / 12.0, 1e-10);
  const QuadratureRule comp = composite_gauss_legendre(4, 10, 0.0, 1.0);
  EXPECT_EQ(comp.size(), 40u);
  EXPECT_NEAR(comp.integrate([](const Point& p) { return std::exp(p[0]); }), std::exp(1.0) - 1.0, 1e-14);
}

TEST(Quadrature, TensorRuleLastAxisFastest) {
  const QuadratureRule axis = gauss_legendre_rule(3, 0.0, 1.0);
  const QuadratureRule rule = tensor_rule(axis, 2);
  ASSERT_EQ(rule.size(), 9u);
  EXPECT_DOUBLE_EQ(rule.node(0)[0], rule.node(1)[0]);
  EXPECT_NE(rule.node(0)[1], rule.node(1)[1]);
  EXPECT_DOUBLE_EQ(rule.node(1)[1], axis.nodes[1]);
  EXPECT_NEAR(rule.integrate([](const Point& p) { return p[0] * p[0] * p[1]; }), 1.0 / 6.0, 1e-15);
}

TEST(Quadrature, RejectsEmptyRule) {
  EXPECT_THROW(gauss_hermite_rule(0), std::invalid_argument);
}

}  // namespace
}  // namespace hermflow
