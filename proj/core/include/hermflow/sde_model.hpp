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

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hermflow/common.hpp"

namespace hermflow {

enum class ModelFamily { Gaussian, OrnsteinUhlenbeck, Trig, Custom };

std::string to_string(ModelFamily family);

/// dX = sigma(X) dB + b(X) dt with closed-form partials: b to first order,
/// sigma to second order. sigma is d x r.
struct SdeModel {
  int dim = 1;
  int noise_dim = 1;
  ModelFamily family = ModelFamily::Custom;
  std::string name;
  std::vector<std::pair<std::string, double>> parameters;

  std::function<Point(const Point&)> drift;
  std::function<SmallMatrix(const Point&)> drift_jacobian;  // (i, j) = d_j b_i
  std::function<SmallMatrix(const Point&)> diffusion;       // (i, k) = sigma_ik
  std::function<SmallMatrix(const Point&, int)> diffusion_partial;  // d_l sigma
  std::function<SmallMatrix(const Point&, int, int)> diffusion_second_partial;

  /// K with ||sigma(x)|| + ||b(x)|| <= K (1 + |x|).
  double growth_constant = 0.0;

  /// True when sigma is constant (its partials vanish identically).
  bool additive_noise = false;

  double parameter(const std::string& key) const;
};

/// sigma = 0, b = 0: every point stays put.
SdeModel frozen_model(int dim);

/// sigma = I_d, b = 0: X(t, x) = x + B_t.
SdeModel gaussian_model(int dim);

/// b(x) = -lambda x, sigma = s I_d.
SdeModel ou_model(double lambda, double sigma, int dim = 1);

/// d = r = 1, sigma(x) = 1 + amplitude sin x, b(x) = drift_amplitude sin x.
SdeModel trig_model(double amplitude = 0.5, double drift_amplitude = 0.0);

/// Same drift as `model`, sigma frozen to zero.
SdeModel drift_only(const SdeModel& model);

}  // namespace hermflow
