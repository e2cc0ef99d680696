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

#include <string>
#include <utility>
#include <vector>

#include "hermflow/multi_index.hpp"
#include "hermflow/quadrature.hpp"
#include "hermflow/test_function.hpp"

namespace hermflow {

enum class InitialKind { Smooth, Delta, DerivativeDelta, Combination };

std::string to_string(InitialKind kind);

/// Initial datum psi of the flow SPDE: a smooth compactly supported function
/// (integrated on a Legendre rule over its support box), delta_x, a first
/// order derivative d^gamma delta_x, or a finite linear combination of these.
struct InitialCondition {
  InitialKind kind = InitialKind::Delta;
  int dim = 1;
  TestFunction function;  // Smooth
  QuadratureRule rule;    // Smooth: nodes cover the support box
  Point point;            // Delta, DerivativeDelta
  MultiIndex gamma;       // DerivativeDelta, |gamma| = 1
  std::vector<std::pair<double, InitialCondition>> terms;  // Combination

  /// lambda with supp psi inside the closed ball B(0, lambda).
  double support_radius() const;

  /// Initial points an ensemble must contain for this datum. For a smooth
  /// datum in d = 1 the support endpoints are appended after the rule nodes.
  std::vector<Point> ensemble_nodes() const;

  /// Pairing <psi, f> computed the same way Z_0(psi) is.
  double pair(const TestFunction& f) const;
};

/// Smooth datum from a compactly supported function; the rule is a tensor
/// composite Gauss-Legendre rule on the support box with `panels` panels of
/// `nodes` points (panels <= 0 picks 8 in d = 1 and 4 otherwise).
InitialCondition smooth_initial(const TestFunction& psi, int nodes = 12, int panels = 0);

/// psi = bump_function(amplitude, center, width).
InitialCondition bump_initial(double amplitude, const Point& center, double width);
InitialCondition bump_initial(double amplitude, double center, double width);

InitialCondition delta_initial(const Point& x);

/// d^gamma delta_x with |gamma| = 1.
InitialCondition derivative_delta_initial(const Point& x, const MultiIndex& gamma);

/// alpha psi1 + beta psi2, kept term by term so that every linear map of
/// psi is evaluated as the same combination of its values on the terms.
InitialCondition combine(double alpha, const InitialCondition& psi1, double beta,
                         const InitialCondition& psi2);

}  // namespace hermflow
