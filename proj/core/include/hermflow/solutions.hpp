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

#include "hermflow/flow.hpp"
#include "hermflow/initial_condition.hpp"
#include "hermflow/operators.hpp"
#include "hermflow/sobolev.hpp"

namespace hermflow {

/// Direct evaluation of <Z_{t_n}(psi), g> = <psi, g o X(t_n, .)> on a flow
/// ensemble, without passing through truncated coefficients.
///
/// psi is reduced to atoms (node, weight, derivative axis): Legendre nodes
/// weighted by w_q psi(x_q) for smooth data, the point itself for delta_x,
/// and -e_a^T J for d^{e_a} delta_x (first order chain rule).
class FlowPairing {
 public:
  /// Throws std::invalid_argument when the ensemble lacks a node psi needs.
  FlowPairing(const InitialCondition& psi, const FlowEnsemble& ensemble);

  const FlowEnsemble& ensemble() const { return *ensemble_; }
  bool has_derivative_atoms() const { return has_derivative_; }

  /// <Z_{t_n}(psi), g>. The ScalarField overload rejects derivative atoms.
  double pair(int n, const ScalarField& g) const;
  double pair(int n, const TestFunction& g) const;

  /// Flow images X(t_n, x_q) and weights of the value atoms, so that
  /// <Z_{t_n}(psi), g> = sum_q weights[q] g(points[q]).
  void atoms(int n, std::vector<Point>& points, std::vector<double>& weights) const;

  /// Truncated coefficients <Z_{t_n}(psi), h_k>, |k| <= N.
  CoeffVector coeffs(int n, int trunc) const;

  /// sum_q w_q (grad h_k(X) sigma(X) dB)_k summed over value atoms: the
  /// martingale increment of the coefficients over step n -> n+1.
  CoeffVector martingale_increment(int n, int trunc) const;

 private:
  struct Atom {
    std::size_t node;
    double weight;
    int axis;  // -1 for value atoms
  };
  const FlowEnsemble* ensemble_;
  std::vector<Atom> atoms_;
  bool has_derivative_ = false;
};

/// Z_{t_n}(psi) in truncated coordinates at every grid time.
struct DistributionPath {
  std::vector<double> times;
  std::vector<CoeffVector> coeffs;
  std::uint64_t ensemble_id = 0;
  std::string source;  // kind of psi
};

DistributionPath z_coeffs(const InitialCondition& psi, const FlowEnsemble& ensemble, int trunc);

/// Density of Z_{t_n}(psi) for a smooth psi in d = 1: psi(x) / J(t_n, x) at
/// x = X(t_n, .)^{-1} y, and 0 for y outside the image of the support.
std::vector<double> z_density_1d(const InitialCondition& psi, const FlowEnsemble& ensemble, int n,
                                 const std::vector<double>& ys);

/// ||Z_{t_n}(psi)||_0^2 = integral psi(x)^2 / |det J(t_n, x)| dx for smooth psi
/// (change of variables; no inversion needed).
double z_l2_norm_squared(const InitialCondition& psi, const FlowEnsemble& ensemble, int n);

}  // namespace hermflow
