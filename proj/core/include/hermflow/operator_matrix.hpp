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

#include <iosfwd>
#include <string>

#include <Eigen/Core>

#include "hermflow/multi_index.hpp"

namespace hermflow {

class CoeffVector;

enum class OperatorTag { Diffusion, Generator, Derivative, Position };
// Diffusion = A_i, Generator = L.

std::string to_string(OperatorTag tag);

/// Matrix of an operator on truncated Hermite coefficients:
/// entry (k, l) = <h_k, Op h_l>, rows indexed by the range set (|k| <= range
/// truncation), columns by the domain set (|l| <= domain truncation).
/// The adjoint acts by the transpose.
struct OperatorMatrix {
  OperatorTag tag = OperatorTag::Derivative;
  int axis = 0;  // coordinate i for Derivative/Position, noise index for Diffusion
  int dim = 1;
  int domain_trunc = 0;
  int range_trunc = 0;
  Eigen::MatrixXd matrix;

  int trunc() const { return domain_trunc; }
  bool square() const { return domain_trunc == range_trunc; }

  /// M phi; phi must live on the domain set.
  CoeffVector apply(const CoeffVector& phi) const;
};

enum class LadderKind { Multiply, Differentiate };

/// Banded matrix of x_i (Multiply) or d/dx_i (Differentiate) on the basis
/// { h_k : |k| <= N } from the ladder identities
///   x h_k  = sqrt((k+1)/2) h_{k+1} + sqrt(k/2) h_{k-1}
///   h_k'   = sqrt(k/2) h_{k-1} - sqrt((k+1)/2) h_{k+1}.
/// Images that leave the truncated set are dropped; see ladder_edge_mass.
/// `axis` is zero based. Throws std::invalid_argument for N < 1 or a bad axis.
OperatorMatrix ladder_matrix(LadderKind kind, int axis, int trunc, int dim);

/// Squared L2 mass of `ladder(phi)` that falls outside |k| <= N and was
/// therefore dropped by ladder_matrix.
double ladder_edge_mass(LadderKind kind, int axis, const CoeffVector& phi);

/// Coefficient CSV with a (row, col, value) triplet section for nonzeros.
void write_operator_csv(std::ostream& out, const OperatorMatrix& m);
OperatorMatrix read_operator_csv(std::istream& in);

}  // namespace hermflow
