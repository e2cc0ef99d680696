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
#include <vector>

#include "hermflow/initial_condition.hpp"
#include "hermflow/sde_model.hpp"
#include "hermflow/sobolev.hpp"
#include "hermflow/test_function.hpp"

namespace hermflow {

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Mean and standard error of a sample, in input order.
Estimate sample_estimate(const std::vector<double>& samples);

/// S_u f(y) = E f(X(u, y)) and A_i S_u f(y), paired against finitely many
/// weighted points: sum_q w_q (S_u f)(y_q). Pairing inside the evaluator
/// lets Monte Carlo implementations reuse one inner path for every point and
/// report an honest standard error for the whole linear functional.
/// `key` selects independent randomness (e.g. outer path and time index).
class SemigroupEvaluator {
 public:
  virtual ~SemigroupEvaluator() = default;

  virtual const SdeModel& model() const = 0;
  /// True when estimates carry no statistical error.
  virtual bool deterministic() const = 0;

  virtual Estimate pair_value(const TestFunction& f, double u, const std::vector<Point>& ys,
                              const std::vector<double>& ws, std::uint64_t key) const = 0;

  /// Entry i is sum_q w_q (A_i S_u f)(y_q); needs the gradient of f.
  virtual std::vector<Estimate> pair_diffusion(const TestFunction& f, double u,
                                               const std::vector<Point>& ys,
                                               const std::vector<double>& ws,
                                               std::uint64_t key) const = 0;
};

/// Euler-Maruyama Monte Carlo with `paths` inner paths per call. Gradients
/// use the pathwise derivative grad_y E f(X(u, y)) = E[J(u, y)^T grad f(X)].
/// u must be a multiple of dt.
class MonteCarloSemigroup final : public SemigroupEvaluator {
 public:
  MonteCarloSemigroup(SdeModel model, double dt, int paths, std::uint64_t seed);

  const SdeModel& model() const override { return model_; }
  bool deterministic() const override { return false; }
  Estimate pair_value(const TestFunction& f, double u, const std::vector<Point>& ys,
                      const std::vector<double>& ws, std::uint64_t key) const override;
  std::vector<Estimate> pair_diffusion(const TestFunction& f, double u,
                                       const std::vector<Point>& ys,
                                       const std::vector<double>& ws,
                                       std::uint64_t key) const override;

 private:
  SdeModel model_;
  double dt_;
  int paths_;
  std::uint64_t seed_;
};

/// Exact transition law of the Gaussian (lambda = 0, s = 1) and OU models:
/// X(u, y) ~ N(e^{-lambda u} y, s^2 v(u) I), v(u) = (1 - e^{-2 lambda u}) / (2 lambda).
/// Expectations by tensor Gauss-Hermite quadrature.
class GaussianTransitionSemigroup final : public SemigroupEvaluator {
 public:
  explicit GaussianTransitionSemigroup(SdeModel model, int nodes = 64);

  const SdeModel& model() const override { return model_; }
  bool deterministic() const override { return true; }
  Estimate pair_value(const TestFunction& f, double u, const std::vector<Point>& ys,
                      const std::vector<double>& ws, std::uint64_t key) const override;
  std::vector<Estimate> pair_diffusion(const TestFunction& f, double u,
                                       const std::vector<Point>& ys,
                                       const std::vector<double>& ws,
                                       std::uint64_t key) const override;

  double lambda() const { return lambda_; }
  double scale() const { return scale_; }
  /// Mean factor e^{-lambda u} and standard deviation s sqrt(v(u)).
  double mean_factor(double u) const;
  double stddev(double u) const;

 private:
  SdeModel model_;
  double lambda_ = 0.0;
  double scale_ = 1.0;
  QuadratureRule rule_;  // standard normal nodes and probability weights
};

/// Monte Carlo mean of f(X(t, x)) over `paths` independent Euler-Maruyama
/// paths of step dt. Throws std::invalid_argument for paths < 2.
Estimate semigroup_apply(const TestFunction& f, const SdeModel& model, double t, const Point& x,
                         int paths, double dt, std::uint64_t seed);

struct DualCoefficients {
  CoeffVector mean;
  CoeffVector std_error;
};

/// S_t^* psi = E Z_t(psi) in truncated coordinates: the average of the
/// Z_t(psi) coefficients over `paths` independent ensembles.
DualCoefficients dual_semigroup_coeffs(const InitialCondition& psi, const SdeModel& model, double t,
                                       int trunc, int paths, double dt, std::uint64_t seed);

}  // namespace hermflow
