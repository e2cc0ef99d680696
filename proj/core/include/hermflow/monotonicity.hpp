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

#include "hermflow/operators.hpp"
#include "hermflow/report.hpp"

namespace hermflow {

/// The weight m with 2<L^* phi, phi> + sum_k ||A_k^* phi||^2 = integral m phi^2
/// for every phi in C_c^infinity:
///   m = -sum_i d_i b_i - sum_{i,j,k} [d_ij(sigma_jk) sigma_ik - 1/2 d_ij(sigma_ik sigma_jk)].
/// The gradient terms of the two adjoint expansions cancel exactly. In
/// d = r = 1 with b = 0 this is m = (sigma')^2.
ScalarField monotonicity_weight(const SdeModel& model);

/// C_K = max of m over the closed ball of radius R about the origin, by dense
/// sampling of the enclosing box (points outside the ball are skipped).
/// samples_per_axis <= 0 picks 10^4 in d = 1 and 10^3 per axis otherwise.
double weight_supremum(const SdeModel& model, double radius, int samples_per_axis = 0);

/// Legendre tensor rule covering the support box of a compactly supported
/// phi: `panels` panels of `nodes` points per axis.
QuadratureRule support_rule(const TestFunction& phi, int nodes = 12, int panels = 32);

/// 2<L^* phi, phi>_0 + sum_i ||A_i^* phi||_0^2 with the adjoints applied in
/// closed form and the L2 pairings integrated on `rule`. Throws
/// std::invalid_argument when the support of phi is not inside the rule's box.
double monotonicity_form(const TestFunction& phi, const SdeModel& model,
                         const QuadratureRule& rule);

/// The same form on truncated coefficients: Galerkin matrices of L and A_i,
/// adjoint_apply, and sobolev_inner at p = 0. The A_i images are kept up to
/// |k| <= N + range_margin so the squared norms lose only the far tail.
/// `galerkin_rule` is a tensor Gauss-Hermite rule.
double monotonicity_form(const CoeffVector& phi, const SdeModel& model,
                         const QuadratureRule& galerkin_rule, int range_margin = 8);

/// integral of m phi^2 on `rule`.
double weight_integral(const TestFunction& phi, const SdeModel& model, const QuadratureRule& rule);

/// The drift part alone: 2<L_1^* phi, phi> + integral (div b) phi^2; zero for
/// every phi by integration by parts.
double drift_identity_residual(const TestFunction& phi, const SdeModel& model,
                               const QuadratureRule& rule);

struct MonotonicityCheckOptions {
  double support_radius = 4.0;  // random bumps live in B(0, R)
  int trials = 20;
  double tolerance = 1e-5;      // relative to ||phi||_0^2
  double ratio_tolerance = 1e-4;
  std::uint64_t seed = 1;
};

/// Randomized sweep over bumps supported in B(0, R). For each bump:
/// form <= C_K ||phi||^2 + ratio_tolerance ||phi||^2 and
/// |form - integral m phi^2| <= tolerance ||phi||^2. Series entries are
/// the identity defects per trial; diagnostics hold C_K and the ratio range.
VerificationReport monotonicity_check(const SdeModel& model, const MonotonicityCheckOptions& opts);

}  // namespace hermflow
