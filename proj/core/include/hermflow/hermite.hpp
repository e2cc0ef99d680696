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

#include <vector>

#include <Eigen/Core>

#include "hermflow/common.hpp"
#include "hermflow/multi_index.hpp"

namespace hermflow {

/// Values h_0(x), ..., h_N(x) of the orthonormal Hermite functions.
///
/// Uses the normalized three-term recurrence
///   h_{k+1}(x) = x sqrt(2/(k+1)) h_k(x) - sqrt(k/(k+1)) h_{k-1}(x),
/// seeded by h_0(x) = pi^{-1/4} exp(-x^2/2). No Hermite polynomial is ever
/// formed, so the recurrence stays in range for N in the thousands.
std::vector<double> hermite_eval_1d(int max_degree, double x);

/// m-th derivatives h_k^{(m)}(x) for k = 0..N, obtained from the ladder
/// relation h_k' = sqrt(k/2) h_{k-1} - sqrt((k+1)/2) h_{k+1} applied m times.
std::vector<double> hermite_derivative_1d(int max_degree, int derivative_order,
                                          double x);

/// Values together with first and second derivatives at one abscissa.
struct HermiteJet {
  std::vector<double> value;
  std::vector<double> first;
  std::vector<double> second;
};
HermiteJet hermite_jet_1d(int max_degree, double x);

/// prod_i h_{k_i}(x_i). Throws std::invalid_argument on dimension mismatch.
double hermite_eval_multi(const MultiIndex& k, const Point& x);

/// All basis functions of `set` evaluated at x, in graded-lex order.
Eigen::VectorXd basis_values(const MultiIndexSet& set, const Point& x);

/// Gradient of every basis function at x; row = basis position, col = axis.
Eigen::MatrixXd basis_gradients(const MultiIndexSet& set, const Point& x);

}  // namespace hermflow
