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
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "hermflow/multi_index.hpp"
#include "hermflow/quadrature.hpp"

namespace hermflow {

/// Truncated Hermite coefficients c_k = <f, h_k>, |k| <= N, in graded-lex
/// order. This is how every element of S_p is represented; the truncation
/// itself is the regularization that keeps negative-index norms finite.
class CoeffVector {
 public:
  CoeffVector(int dim, int trunc);  // zeros
  CoeffVector(int dim, int trunc, Eigen::VectorXd values);

  static CoeffVector unit(int dim, int trunc, const MultiIndex& k);

  int dim() const { return dim_; }
  int trunc() const { return trunc_; }
  std::size_t size() const { return static_cast<std::size_t>(values_.size()); }

  const Eigen::VectorXd& values() const { return values_; }
  Eigen::VectorXd& values() { return values_; }
  double operator[](std::size_t pos) const { return values_[static_cast<Eigen::Index>(pos)]; }
  double& operator[](std::size_t pos) { return values_[static_cast<Eigen::Index>(pos)]; }

  /// Coefficient of h_k, zero if |k| > N.
  double coefficient(const MultiIndex& k) const;

  /// Copy onto a different truncation (zero padded or cut).
  CoeffVector retruncated(int trunc) const;

  /// Evaluates sum_k c_k h_k(x).
  double evaluate(const Point& x) const;

  bool same_shape(const CoeffVector& other) const {
    return dim_ == other.dim_ && trunc_ == other.trunc_;
  }

  CoeffVector& operator+=(const CoeffVector& other);
  CoeffVector& operator-=(const CoeffVector& other);
  CoeffVector& operator*=(double s);

 private:
  int dim_;
  int trunc_;
  Eigen::VectorXd values_;
};

CoeffVector operator+(CoeffVector a, const CoeffVector& b);
CoeffVector operator-(CoeffVector a, const CoeffVector& b);
CoeffVector operator*(double s, CoeffVector a);

/// Hermite-Sobolev index p (any finite real).
struct SobolevIndex {
  double p = 0.0;
  explicit SobolevIndex(double value);
};

/// <f, g>_p = sum_{|k| <= N} (2|k| + d)^{2p} f_k g_k.
double sobolev_inner(const CoeffVector& f, const CoeffVector& g, SobolevIndex p);
double sobolev_norm(const CoeffVector& f, SobolevIndex p);

/// Coefficients <d^gamma delta_x, h_k> = (-1)^{|gamma|} (d^gamma h_k)(x).
CoeffVector delta_coeffs(const MultiIndex& gamma, const Point& x, int trunc);

/// c_k = quadrature estimate of the integral of f h_k. Warns when the rule
/// has fewer than N+1 nodes per axis.
CoeffVector project_function(const std::function<double(const Point&)>& f,
                             int trunc, const QuadratureRule& rule);

/// Partial sums S_n = sum_{|k| <= n} (2|k|+d)^{-2p} <d^gamma delta_x, h_k>^2
/// for n = 1..N_max. Non-decreasing by construction.
std::vector<double> membership_profile(const MultiIndex& gamma, const Point& x,
                                       double p, int max_trunc);

/// Least-squares slope of log(increment) against log(n) over the nonzero
/// increments of a partial-sum sequence with n in [first_n, last n].
/// Used to report convergence or stalling; never to classify.
double log_increment_slope(const std::vector<double>& partial_sums, int first_n);

/// Flat text layout: "dim,<d>", "trunc,<N>", "ordering,graded-lex", then one
/// value per line in graded-lex order.
void write_coeff_csv(std::ostream& out, const CoeffVector& v);
CoeffVector read_coeff_csv(std::istream& in);

}  // namespace hermflow
