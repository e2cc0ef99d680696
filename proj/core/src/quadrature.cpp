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

#include "hermflow/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "hermflow/hermite.hpp"

namespace hermflow {

namespace {

// Eigenvalues of the symmetric tridiagonal Jacobi matrix (Golub-Welsch);
// weights are recovered separately.
std::vector<double> jacobi_eigenvalues(const Eigen::VectorXd& diag,
                                       const Eigen::VectorXd& offdiag) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, offdiag, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("quadrature: tridiagonal eigensolver failed");
  }
  std::vector<double> out(solver.eigenvalues().data(),
                          solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(out.begin(), out.end());
  return out;
}

// Newton polish of a root of h_n using h_n' = sqrt(2n) h_{n-1} - x h_n.
double polish_hermite_root(int n, double x) {
  for (int it = 0; it < 4; ++it) {
    const auto h = hermite_eval_1d(n, x);
    const double hn = h[static_cast<std::size_t>(n)];
    const double dh = std::sqrt(2.0 * n) * h[static_cast<std::size_t>(n - 1)] - x * hn;
    if (dh == 0.0) break;
    const double step = hn / dh;
    x -= step;
    if (std::abs(step) < 1e-16 * (1.0 + std::abs(x))) break;
  }
  return x;
}

struct LegendreValue {
  double p;
  double dp;
};

LegendreValue legendre(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  if (n == 0) return {1.0, 0.0};
  const double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

}  // namespace

Point QuadratureRule::node(std::size_t i) const {
  Point p(dim);
  for (int a = 0; a < dim; ++a) p[a] = nodes[i * static_cast<std::size_t>(dim) + static_cast<std::size_t>(a)];
  return p;
}

double QuadratureRule::integrate(const std::function<double(const Point&)>& f) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < size(); ++i) sum += lebesgue_weights[i] * f(node(i));
  return sum;
}

QuadratureRule gauss_hermite_rule(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite_rule: n must be >= 1");
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd off(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) off[k - 1] = std::sqrt(k / 2.0);
  std::vector<double> x = n == 1 ? std::vector<double>{0.0} : jacobi_eigenvalues(diag, off);

  QuadratureRule rule;
  rule.kind = QuadratureKind::GaussHermite;
  rule.dim = 1;
  rule.order_per_axis = n;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  rule.lebesgue_weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double xi = n == 1 ? 0.0 : polish_hermite_root(n, x[static_cast<std::size_t>(i)]);
    // Symmetrize: the rule is exactly symmetric about 0.
    if (i >= (n + 1) / 2) xi = -rule.nodes[static_cast<std::size_t>(n - 1 - i)];
    if (n % 2 == 1 && i == n / 2) xi = 0.0;
    const auto h = hermite_eval_1d(n - 1, xi);
    double christoffel = 0.0;
    for (double v : h) christoffel += v * v;
    rule.nodes[static_cast<std::size_t>(i)] = xi;
    rule.lebesgue_weights[static_cast<std::size_t>(i)] = 1.0 / christoffel;
    rule.weights[static_cast<std::size_t>(i)] = std::exp(-xi * xi) / christoffel;
  }
  return rule;
}

QuadratureRule gauss_legendre_rule(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre_rule: n must be >= 1");
  if (!(a < b)) throw std::invalid_argument("gauss_legendre_rule: degenerate interval");
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd off(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) off[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
  std::vector<double> t = n == 1 ? std::vector<double>{0.0} : jacobi_eigenvalues(diag, off);

  QuadratureRule rule;
  rule.kind = QuadratureKind::GaussLegendre;
  rule.dim = 1;
  rule.order_per_axis = n;
  rule.lower = a;
  rule.upper = b;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  std::vector<double> ref(static_cast<std::size_t>(n));
  std::vector<double> refw(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double xi = t[static_cast<std::size_t>(i)];
    if (n > 1) {
      for (int it = 0; it < 4; ++it) {
        const auto [p, dp] = legendre(n, xi);
        const double step = p / dp;
        xi -= step;
        if (std::abs(step) < 1e-16) break;
      }
    } else {
      xi = 0.0;
    }
    if (i >= (n + 1) / 2) xi = -ref[static_cast<std::size_t>(n - 1 - i)];
    if (n % 2 == 1 && i == n / 2) xi = 0.0;
    const double dp = n == 1 ? 1.0 : legendre(n, xi).dp;
    ref[static_cast<std::size_t>(i)] = xi;
    refw[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - xi * xi) * dp * dp);
  }
  for (int i = 0; i < n; ++i) {
    rule.nodes[static_cast<std::size_t>(i)] = mid + half * ref[static_cast<std::size_t>(i)];
    rule.weights[static_cast<std::size_t>(i)] = half * refw[static_cast<std::size_t>(i)];
  }
  rule.lebesgue_weights = rule.weights;
  return rule;
}

QuadratureRule composite_gauss_legendre(int n, int panels, double a, double b) {
  if (panels < 1) throw std::invalid_argument("composite_gauss_legendre: panels < 1");
  if (!(a < b)) throw std::invalid_argument("composite_gauss_legendre: degenerate interval");
  QuadratureRule rule;
  rule.kind = QuadratureKind::GaussLegendre;
  rule.dim = 1;
  rule.order_per_axis = n * panels;
  rule.lower = a;
  rule.upper = b;
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double hi = p + 1 == panels ? b : lo + width;
    const QuadratureRule panel = gauss_legendre_rule(n, lo, hi);
    rule.nodes.insert(rule.nodes.end(), panel.nodes.begin(), panel.nodes.end());
    rule.weights.insert(rule.weights.end(), panel.weights.begin(), panel.weights.end());
  }
  rule.lebesgue_weights = rule.weights;
  return rule;
}

QuadratureRule tensor_rule(const QuadratureRule& axis_rule, int dim) {
  check_dimension(dim, "tensor_rule");
  if (axis_rule.dim != 1) throw std::invalid_argument("tensor_rule: axis rule must be 1-d");
  QuadratureRule rule = axis_rule;
  rule.dim = dim;
  if (dim == 1) return rule;
  const std::size_t n = axis_rule.size();
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) total *= n;
  rule.nodes.assign(total * static_cast<std::size_t>(dim), 0.0);
  rule.weights.assign(total, 1.0);
  rule.lebesgue_weights.assign(total, 1.0);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rem = i;
    // Last axis varies fastest.
    for (int a = dim - 1; a >= 0; --a) {
      const std::size_t j = rem % n;
      rem /= n;
      rule.nodes[i * static_cast<std::size_t>(dim) + static_cast<std::size_t>(a)] = axis_rule.nodes[j];
      rule.weights[i] *= axis_rule.weights[j];
      rule.lebesgue_weights[i] *= axis_rule.lebesgue_weights[j];
    }
  }
  return rule;
}

}  // namespace hermflow
