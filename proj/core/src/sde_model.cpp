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

#include "hermflow/sde_model.hpp"

#include <cmath>
#include <stdexcept>

namespace hermflow {

std::string to_string(ModelFamily family) {
  switch (family) {
    case ModelFamily::Gaussian: return "gaussian";
    case ModelFamily::OrnsteinUhlenbeck: return "ou";
    case ModelFamily::Trig: return "trig";
    case ModelFamily::Custom: return "custom";
  }
  return "custom";
}

double SdeModel::parameter(const std::string& key) const {
  for (const auto& [k, v] : parameters) {
    if (k == key) return v;
  }
  throw std::out_of_range("SdeModel: no parameter '" + key + "' on model " + name);
}

namespace {

SdeModel constant_diffusion_model(int dim, double scale) {
  check_dimension(dim, "SdeModel");
  SdeModel m;
  m.dim = dim;
  m.noise_dim = dim;
  m.additive_noise = true;
  const SmallMatrix sigma = scale * SmallMatrix::Identity(dim, dim);
  const SmallMatrix zero = SmallMatrix::Zero(dim, dim);
  m.drift = [dim](const Point&) { return Point(Point::Zero(dim)); };
  m.drift_jacobian = [zero](const Point&) { return zero; };
  m.diffusion = [sigma](const Point&) { return sigma; };
  m.diffusion_partial = [zero](const Point&, int) { return zero; };
  m.diffusion_second_partial = [zero](const Point&, int, int) { return zero; };
  m.growth_constant = std::abs(scale) * std::sqrt(static_cast<double>(dim));
  return m;
}

}  // namespace

SdeModel frozen_model(int dim) {
  SdeModel m = constant_diffusion_model(dim, 0.0);
  m.family = ModelFamily::Custom;
  m.name = "frozen";
  return m;
}

SdeModel gaussian_model(int dim) {
  SdeModel m = constant_diffusion_model(dim, 1.0);
  m.family = ModelFamily::Gaussian;
  m.name = "gaussian";
  return m;
}

SdeModel ou_model(double lambda, double sigma, int dim) {
  SdeModel m = constant_diffusion_model(dim, sigma);
  m.family = ModelFamily::OrnsteinUhlenbeck;
  m.name = "ou";
  m.parameters = {{"lambda", lambda}, {"sigma", sigma}};
  m.drift = [lambda](const Point& x) { return Point(-lambda * x); };
  const SmallMatrix jac = -lambda * SmallMatrix::Identity(dim, dim);
  m.drift_jacobian = [jac](const Point&) { return jac; };
  m.growth_constant += std::abs(lambda);
  return m;
}

SdeModel trig_model(double amplitude, double drift_amplitude) {
  SdeModel m;
  m.dim = 1;
  m.noise_dim = 1;
  m.family = ModelFamily::Trig;
  m.name = "trig";
  m.parameters = {{"amplitude", amplitude}, {"drift_amplitude", drift_amplitude}};
  auto scalar = [](double v) {
    SmallMatrix s(1, 1);
    s(0, 0) = v;
    return s;
  };
  m.drift = [drift_amplitude](const Point& x) { return point1(drift_amplitude * std::sin(x[0])); };
  m.drift_jacobian = [=](const Point& x) { return scalar(drift_amplitude * std::cos(x[0])); };
  m.diffusion = [=](const Point& x) { return scalar(1.0 + amplitude * std::sin(x[0])); };
  m.diffusion_partial = [=](const Point& x, int) { return scalar(amplitude * std::cos(x[0])); };
  m.diffusion_second_partial = [=](const Point& x, int, int) {
    return scalar(-amplitude * std::sin(x[0]));
  };
  m.growth_constant = 1.0 + std::abs(amplitude) + std::abs(drift_amplitude);
  m.additive_noise = amplitude == 0.0;
  return m;
}

SdeModel drift_only(const SdeModel& model) {
  SdeModel m = model;
  m.name = model.name + "-drift-only";
  const int d = model.dim;
  const int r = model.noise_dim;
  const SmallMatrix zero = SmallMatrix::Zero(d, r);
  m.diffusion = [zero](const Point&) { return zero; };
  m.diffusion_partial = [zero](const Point&, int) { return zero; };
  m.diffusion_second_partial = [zero](const Point&, int, int) { return zero; };
  m.additive_noise = true;
  return m;
}

}  // namespace hermflow
