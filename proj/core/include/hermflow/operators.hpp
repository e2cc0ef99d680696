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

#include "hermflow/operator_matrix.hpp"
#include "hermflow/quadrature.hpp"
#include "hermflow/sde_model.hpp"
#include "hermflow/sobolev.hpp"
#include "hermflow/test_function.hpp"

namespace hermflow {

using ScalarField = std::function<double(const Point&)>;

/// Pointwise A_i phi = sum_k sigma_ki d_k phi (tag Diffusion, noise index i)
/// or L phi = 1/2 sum (sigma sigma^T)_ij d_ij phi + sum b_i d_i phi
/// (tag Generator). Throws std::invalid_argument when phi lacks the partials
/// the operator needs.
ScalarField apply_operator_pointwise(OperatorTag tag, int noise_index, const SdeModel& model,
                                     const TestFunction& phi);

/// Pointwise formal adjoints, expanded with the model's closed-form partials:
///   A_i^* phi = -sum_k d_k(sigma_ki phi)
///   L^* phi   = 1/2 sum d_ij((sigma sigma^T)_ij phi) - sum d_i(b_i phi).
ScalarField adjoint_pointwise(OperatorTag tag, int noise_index, const SdeModel& model,
                              const TestFunction& phi);

/// Galerkin matrix M(k, l) = <h_k, Op h_l> by quadrature on `rule` (a tensor
/// Gauss-Hermite rule). Rows run over |k| <= range_trunc (defaults to N),
/// columns over |l| <= N. `axis` is the noise index for Diffusion and the
/// coordinate for Derivative/Position; ignored for Generator. Warns when the
/// rule has fewer than max(N, range_trunc) + 4 nodes per axis.
OperatorMatrix assemble_galerkin(OperatorTag tag, int axis, const SdeModel& model, int trunc,
                                 const QuadratureRule& rule, int range_trunc = -1);

/// M^T psi: the adjoint of M acting on psi (psi on the range set). Duality
/// <M^T psi, phi> = <psi, M phi> holds exactly at truncation.
CoeffVector adjoint_apply(const OperatorMatrix& m, const CoeffVector& psi);

}  // namespace hermflow
