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

#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "hermflow/common.hpp"
#include "hermflow/multi_index.hpp"

namespace hermflow {

/// A real function on R^d with optional closed-form partials. Operators that
/// need derivatives throw std::invalid_argument when they are missing.
struct TestFunction {
  int dim = 1;
  std::string name;
  std::function<double(const Point&)> value;
  std::function<Point(const Point&)> gradient;
  std::function<SmallMatrix(const Point&)> hessian;

  /// Closed ball containing the support; radius is +inf for functions that
  /// are not compactly supported.
  Point support_center = Point::Zero(1);
  double support_radius = std::numeric_limits<double>::infinity();

  double operator()(const Point& x) const { return value(x); }
  bool has_gradient() const { return static_cast<bool>(gradient); }
  bool has_hessian() const { return static_cast<bool>(hessian); }
  bool compactly_supported() const { return std::isfinite(support_radius); }
};

/// phi(x) = a exp(-1 / (1 - |x - c|^2 / s^2)) for |x - c| < s, zero outside.
/// Genuinely C_c^infinity; value, gradient and Hessian in closed form.
TestFunction bump_function(double amplitude, const Point& center, double width);
TestFunction bump_function(double amplitude, double center, double width);

/// The Hermite function h_k with partials from the ladder relations.
TestFunction hermite_test_function(const MultiIndex& k);

/// phi(x) = <a, x> + b.
TestFunction linear_function(const Point& slope, double offset);

TestFunction constant_function(int dim, double c);

/// alpha f + beta g (partials present only when both operands have them).
TestFunction linear_combination(double alpha, const TestFunction& f, double beta,
                                const TestFunction& g);

}  // namespace hermflow
