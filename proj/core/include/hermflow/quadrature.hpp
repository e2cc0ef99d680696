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

#include <cstddef>
#include <functional>
#include <vector>

#include "hermflow/common.hpp"

namespace hermflow {

enum class QuadratureKind { GaussHermite, GaussLegendre };

/// A tensor-product quadrature rule on R^d.
///
/// `weights` are the classical weights for the rule's weight function
/// (e^{-|x|^2} for Gauss-Hermite, 1 for Gauss-Legendre). `lebesgue_weights`
/// integrate against dx: for Gauss-Hermite they equal w_i e^{|x_i|^2}, but
/// are computed directly from the Christoffel function so that they stay
/// accurate where w_i itself underflows.
struct QuadratureRule {
  QuadratureKind kind = QuadratureKind::GaussLegendre;
  int dim = 1;
  int order_per_axis = 0;  // nodes per axis (all panels for composite rules)
  std::vector<double> nodes;  // size() * dim, node-major
  std::vector<double> weights;
  std::vector<double> lebesgue_weights;
  double lower = 0.0;  // legendre only, same interval on every axis
  double upper = 0.0;

  std::size_t size() const { return weights.size(); }
  Point node(std::size_t i) const;

  /// sum_i lebesgue_weight_i f(x_i), i.e. an estimate of the integral of f dx.
  double integrate(const std::function<double(const Point&)>& f) const;
};

/// n-point Gauss-Hermite rule for weight e^{-x^2}; exact for polynomials of
/// degree <= 2n-1. Throws std::invalid_argument for n == 0.
QuadratureRule gauss_hermite_rule(int n);

/// n-point Gauss-Legendre rule on [a, b]; exact for degree <= 2n-1.
QuadratureRule gauss_legendre_rule(int n, double a, double b);

/// `panels` equal sub-intervals of [a, b], each with an n-point Legendre rule.
QuadratureRule composite_gauss_legendre(int n, int panels, double a, double b);

/// d-fold tensor product of a one-dimensional rule (d <= kMaxDim).
QuadratureRule tensor_rule(const QuadratureRule& axis_rule, int dim);

}  // namespace hermflow
