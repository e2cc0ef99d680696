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

#include "hermflow/semigroup.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hermflow/flow.hpp"
#include "hermflow/parallel.hpp"
#include "hermflow/quadrature.hpp"
#include "hermflow/rng.hpp"
#include "hermflow/solutions.hpp"

namespace hermflow {

Estimate sample_estimate(const std::vector<double>& samples) {
  Estimate e;
  const std::size_t m = samples.size();
  if (m == 0) return e;
  double sum = 0.0;
  for (double v : samples) sum += v;
  e.value = sum / static_cast<double>(m);
  if (m < 2) return e;
  double ss = 0.0;
  for (double v : samples) ss += (v - e.value) * (v - e.value);
  e.std_error = std::sqrt(ss / static_cast<double>(m - 1) / static_cast<double>(m));
  return e;
}

namespace {

void check_points(const std::vector<Point>& ys, const std::vector<double>& ws, int dim) {
  if (ys.size() != ws.size()) throw std::invalid_argument("semigroup: points and weights differ in length");
  for (const Point& y : ys) {
    if (y.size() != dim) throw std::invalid_argument("semigroup: point dimension mismatch");
  }
}

void require_gradient(const TestFunction& f) {
  if (!f.has_gradient()) throw std::invalid_argument("semigroup: A_i S_u f needs the gradient of f");
}

}  // namespace

MonteCarloSemigroup::MonteCarloSemigroup(SdeModel model, double dt, int paths, std::uint64_t seed)
    : model_(std::move(model)), dt_(dt), paths_(paths), seed_(seed) {
  if (!(dt > 0.0)) throw std::invalid_argument("MonteCarloSemigroup: dt must be positive");
  if (paths < 2) throw std::invalid_argument("MonteCarloSemigroup: at least 2 paths are needed");
}

Estimate MonteCarloSemigroup::pair_value(const TestFunction& f, double u,
                                         const std::vector<Point>& ys,
                                         const std::vector<double>& ws, std::uint64_t key) const {
  check_points(ys, ws, model_.dim);
  const int steps = u == 0.0 ? 0 : step_count(u, dt_);
  if (steps == 0) {
    double v = 0.0;
    for (std::size_t q = 0; q < ys.size(); ++q) v += ws[q] * f(ys[q]);
    return {v, 0.0};
  }
  std::vector<double> samples(static_cast<std::size_t>(paths_));
  const std::size_t r = static_cast<std::size_t>(model_.noise_dim);
  parallel_for(samples.size(), [&](std::size_t m) {
    const BrownianPath path = BrownianPath::generate(model_.noise_dim, dt_, steps, seed_,
                                                     derive_stream(seed_, "semigroup", key, m));
    double v = 0.0;
    for (std::size_t q = 0; q < ys.size(); ++q) {
      Point x = ys[q];
      for (int n = 0; n < steps; ++n) {
        euler_step(model_, &path.increments[static_cast<std::size_t>(n) * r], dt_, x, nullptr);
      }
      v += ws[q] * f(x);
    }
    samples[m] = v;
  });
  return sample_estimate(samples);
}

std::vector<Estimate> MonteCarloSemigroup::pair_diffusion(const TestFunction& f, double u,
                                                          const std::vector<Point>& ys,
                                                          const std::vector<double>& ws,
                                                          std::uint64_t key) const {
  check_points(ys, ws, model_.dim);
  require_gradient(f);
  const int r = model_.noise_dim;
  const int steps = u == 0.0 ? 0 : step_count(u, dt_);
  // sample m, noise index i -> sum_q w_q sum_k sigma_ki(y_q) (J^T grad f(X))_k
  auto sample = [&](const BrownianPath* path) {
    std::vector<double> out(static_cast<std::size_t>(r), 0.0);
    for (std::size_t q = 0; q < ys.size(); ++q) {
      Point x = ys[q];
      SmallMatrix jac = SmallMatrix::Identity(model_.dim, model_.dim);
      for (int n = 0; n < steps; ++n) {
        euler_step(model_, &path->increments[static_cast<std::size_t>(n) * static_cast<std::size_t>(r)],
                   dt_, x, &jac);
      }
      const Eigen::VectorXd grad = jac.transpose() * f.gradient(x);
      const SmallMatrix s = model_.diffusion(ys[q]);
      for (int i = 0; i < r; ++i) out[static_cast<std::size_t>(i)] += ws[q] * s.col(i).dot(grad);
    }
    return out;
  };
  if (steps == 0) {
    const std::vector<double> v = sample(nullptr);
    std::vector<Estimate> out;
    for (double x : v) out.push_back({x, 0.0});
    return out;
  }
  std::vector<std::vector<double>> samples(static_cast<std::size_t>(paths_));
  parallel_for(samples.size(), [&](std::size_t m) {
    const BrownianPath path = BrownianPath::generate(r, dt_, steps, seed_,
                                                     derive_stream(seed_, "semigroup-grad", key, m));
    samples[m] = sample(&path);
  });
  std::vector<Estimate> out;
  for (int i = 0; i < r; ++i) {
    std::vector<double> column;
    column.reserve(samples.size());
    for (const auto& s : samples) column.push_back(s[static_cast<std::size_t>(i)]);
    out.push_back(sample_estimate(column));
  }
  return out;
}

GaussianTransitionSemigroup::GaussianTransitionSemigroup(SdeModel model, int nodes)
    : model_(std::move(model)) {
  switch (model_.family) {
    case ModelFamily::Gaussian:
      lambda_ = 0.0;
      scale_ = 1.0;
      break;
    case ModelFamily::OrnsteinUhlenbeck:
      lambda_ = model_.parameter("lambda");
      scale_ = model_.parameter("sigma");
      break;
    default:
      throw std::invalid_argument("GaussianTransitionSemigroup: needs the gaussian or OU model");
  }
  // Rescale Gauss-Hermite (weight e^{-z^2}) to the standard normal law.
  QuadratureRule axis = gauss_hermite_rule(nodes);
  for (auto& z : axis.nodes) z *= std::numbers::sqrt2;
  for (auto& w : axis.weights) w /= std::sqrt(std::numbers::pi);
  axis.lebesgue_weights = axis.weights;
  rule_ = tensor_rule(axis, model_.dim);
}

double GaussianTransitionSemigroup::mean_factor(double u) const { return std::exp(-lambda_ * u); }

double GaussianTransitionSemigroup::stddev(double u) const {
  const double v = lambda_ == 0.0 ? u : -std::expm1(-2.0 * lambda_ * u) / (2.0 * lambda_);
  return scale_ * std::sqrt(v);
}

Estimate GaussianTransitionSemigroup::pair_value(const TestFunction& f, double u,
                                                 const std::vector<Point>& ys,
                                                 const std::vector<double>& ws,
                                                 std::uint64_t) const {
  check_points(ys, ws, model_.dim);
  if (u < 0.0) throw std::invalid_argument("GaussianTransitionSemigroup: negative time");
  double total = 0.0;
  if (u == 0.0) {
    for (std::size_t q = 0; q < ys.size(); ++q) total += ws[q] * f(ys[q]);
    return {total, 0.0};
  }
  const double a = mean_factor(u);
  const double sd = stddev(u);
  for (std::size_t q = 0; q < ys.size(); ++q) {
    double v = 0.0;
    for (std::size_t i = 0; i < rule_.size(); ++i) v += rule_.weights[i] * f(a * ys[q] + sd * rule_.node(i));
    total += ws[q] * v;
  }
  return {total, 0.0};
}

std::vector<Estimate> GaussianTransitionSemigroup::pair_diffusion(const TestFunction& f, double u,
                                                                  const std::vector<Point>& ys,
                                                                  const std::vector<double>& ws,
                                                                  std::uint64_t) const {
  check_points(ys, ws, model_.dim);
  require_gradient(f);
  if (u < 0.0) throw std::invalid_argument("GaussianTransitionSemigroup: negative time");
  const int d = model_.dim;
  const double a = mean_factor(u);
  const double sd = stddev(u);
  // sigma = s I, so A_i S_u f = s d_i S_u f = s a E[d_i f(X(u, y))].
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(d);
  for (std::size_t q = 0; q < ys.size(); ++q) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(d);
    if (u == 0.0) {
      g = f.gradient(ys[q]);
    } else {
      for (std::size_t i = 0; i < rule_.size(); ++i) {
        g += rule_.weights[i] * f.gradient(a * ys[q] + sd * rule_.node(i));
      }
    }
    acc += ws[q] * g;
  }
  std::vector<Estimate> out;
  for (int i = 0; i < d; ++i) out.push_back({scale_ * a * acc[i], 0.0});
  return out;
}

Estimate semigroup_apply(const TestFunction& f, const SdeModel& model, double t, const Point& x,
                         int paths, double dt, std::uint64_t seed) {
  if (paths < 2) throw std::invalid_argument("semigroup_apply: at least 2 paths are needed");
  const MonteCarloSemigroup mc(model, dt, paths, seed);
  return mc.pair_value(f, t, {x}, {1.0}, 0);
}

DualCoefficients dual_semigroup_coeffs(const InitialCondition& psi, const SdeModel& model, double t,
                                       int trunc, int paths, double dt, std::uint64_t seed) {
  if (paths < 1) throw std::invalid_argument("dual_semigroup_coeffs: paths must be positive");
  const std::vector<Point> nodes = psi.ensemble_nodes();
  const int steps = t == 0.0 ? 0 : step_count(t, dt);
  if (steps == 0) {
    const BrownianPath path = BrownianPath::generate(model.noise_dim, dt, 0, seed, 0);
    const FlowEnsemble e = simulate_flow(model, nodes, path);
    CoeffVector c = FlowPairing(psi, e).coeffs(0, trunc);
    return {c, CoeffVector(c.dim(), trunc)};
  }
  std::vector<Eigen::VectorXd> samples(static_cast<std::size_t>(paths));
  parallel_for(samples.size(), [&](std::size_t m) {
    const BrownianPath path = BrownianPath::generate(model.noise_dim, dt, steps, seed,
                                                     derive_stream(seed, "dual", m));
    const FlowEnsemble e = simulate_flow(model, nodes, path, m);
    samples[m] = FlowPairing(psi, e).coeffs(steps, trunc).values();
  });
  const Eigen::Index size = samples.front().size();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(size);
  for (const auto& s : samples) mean += s;
  mean /= static_cast<double>(paths);
  Eigen::VectorXd se = Eigen::VectorXd::Zero(size);
  if (paths > 1) {
    for (const auto& s : samples) se += (s - mean).cwiseAbs2();
    se = (se / static_cast<double>(paths - 1) / static_cast<double>(paths)).cwiseSqrt();
  }
  return {CoeffVector(model.dim, trunc, mean), CoeffVector(model.dim, trunc, se)};
}

}  // namespace hermflow
