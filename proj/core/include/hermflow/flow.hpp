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
#include <iosfwd>
#include <limits>
#include <vector>

#include "hermflow/common.hpp"
#include "hermflow/sde_model.hpp"

namespace hermflow {

/// Brownian increments Delta B[n] ~ N(0, dt I_r), reproducible from
/// (seed, stream). Stored flat, step-major.
struct BrownianPath {
  int noise_dim = 1;
  double dt = 0.0;
  int steps = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::vector<double> increments;

  static BrownianPath generate(int noise_dim, double dt, int steps, std::uint64_t seed,
                               std::uint64_t stream);

  double increment(int n, int i) const {
    return increments[static_cast<std::size_t>(n) * static_cast<std::size_t>(noise_dim) +
                      static_cast<std::size_t>(i)];
  }
  double time(int n) const { return n * dt; }
  double horizon() const { return steps * dt; }

  /// B_{t_n} as the running sum of increments.
  Point value(int n) const;

  /// Sums consecutive blocks of `factor` increments: the same path on a grid
  /// of step factor * dt. steps must be divisible by factor.
  BrownianPath coarsen(int factor) const;

  /// The shifted path theta_{t_offset}: increments from step `offset` on.
  BrownianPath shifted(int offset) const;
};

/// Noise for exact OU simulation on a grid: per step and axis the pair
/// (Delta B, I) with I = integral over the step of e^{-lambda (t_{n+1}-u)} dB_u,
/// sampled jointly Gaussian. `path` holds the Delta B part, so EM and exact
/// schemes driven by the same OuExactNoise share one omega.
struct OuExactNoise {
  double lambda = 0.0;
  BrownianPath path;
  std::vector<double> integrals;  // same layout as path.increments

  static OuExactNoise generate(double lambda, int noise_dim, double dt, int steps,
                               std::uint64_t seed, std::uint64_t stream);

  double integral(int n, int i) const {
    return integrals[static_cast<std::size_t>(n) * static_cast<std::size_t>(path.noise_dim) +
                     static_cast<std::size_t>(i)];
  }

  /// Exact coarsening: Delta B adds, I_coarse = e^{-lambda dt_fine} I_1 + I_2
  /// folded over the block.
  OuExactNoise coarsen(int factor) const;
};

/// X(t_n, x_j) and the Jacobians d_x X(t_n, x_j) for a set of initial points,
/// all driven by one Brownian path.
struct FlowEnsemble {
  SdeModel model;
  BrownianPath path;
  std::vector<Point> nodes;
  std::vector<Point> positions;        // (steps + 1) * nodes, time-major
  std::vector<SmallMatrix> jacobians;  // same layout
  std::uint64_t id = 0;
  bool exact_ou = false;  // produced by simulate_ou_exact
  std::vector<double> ou_integrals;  // kept for trace() when exact_ou

  int steps() const { return path.steps; }
  double dt() const { return path.dt; }
  double time(int n) const { return path.time(n); }
  std::size_t node_count() const { return nodes.size(); }

  const Point& position(int n, std::size_t j) const {
    return positions[static_cast<std::size_t>(n) * nodes.size() + j];
  }
  const SmallMatrix& jacobian(int n, std::size_t j) const {
    return jacobians[static_cast<std::size_t>(n) * nodes.size() + j];
  }

  /// Re-runs the scheme from an arbitrary x on the stored path up to step n.
  /// Bit-identical to the stored rows when x is one of the nodes.
  Point trace(const Point& x, int n) const;
  /// Same, also returning the Jacobian.
  Point trace(const Point& x, int n, SmallMatrix& jacobian) const;
};

/// One Euler-Maruyama step of X and of the variational equation
///   J <- J + (sum_k d sigma_{.k} Delta B_k) J + (grad b) J dt.
/// Pass jacobian == nullptr to skip the Jacobian.
void euler_step(const SdeModel& model, const double* dB, double dt, Point& x,
                SmallMatrix* jacobian);

/// Euler-Maruyama for every node on `path`. In d = 1 a change of sign of J
/// along any node is a hard error (std::runtime_error): the step is too
/// coarse for the map x -> X(t, x) to stay increasing.
FlowEnsemble simulate_flow(const SdeModel& model, const std::vector<Point>& nodes,
                           const BrownianPath& path, std::uint64_t id = 0);

/// Convenience: draws the path from (seed, derive_stream(seed, "flow", id)).
/// T must be a positive multiple of dt.
FlowEnsemble simulate_flow(const SdeModel& model, const std::vector<Point>& nodes, double horizon,
                           double dt, std::uint64_t seed, std::uint64_t id = 0);

/// Exact OU flow X_{n+1} = e^{-lambda dt} X_n + s I_n, J = e^{-lambda t_n} I.
/// Requires an OU model whose lambda matches the noise.
FlowEnsemble simulate_ou_exact(const SdeModel& model, const std::vector<Point>& nodes,
                               const OuExactNoise& noise, std::uint64_t id = 0);

/// Number of steps for horizon T at step dt; throws unless T is a positive
/// multiple of dt.
int step_count(double horizon, double dt);

/// |X(t+s, x) - X(s, X(t, x), theta_t omega)| for one node; t and s must be
/// multiples of dt.
double flow_composition_residual(const SdeModel& model, const Point& x, double t, double s,
                                 double dt, std::uint64_t seed);

/// x with X(t_n, x) = y in d = 1. Nodes are bracketed on the stored grid and
/// refined by safeguarded Newton steps using trace(). Throws
/// std::out_of_range when y is outside the image of the node hull and
/// std::runtime_error when the image is not increasing.
double inverse_flow_1d(const FlowEnsemble& ensemble, int n, double y);

/// First grid time with max over nodes in {|x| <= support} of |X(t_n, x)| >= R;
/// +infinity when that never happens on the grid.
double hitting_time(const FlowEnsemble& ensemble, double support, double radius);

inline constexpr double kNeverHit = std::numeric_limits<double>::infinity();

/// CSV with columns n, t, j, x_j, X, J (one X and J column per component
/// when d > 1).
void write_ensemble_csv(std::ostream& out, const FlowEnsemble& ensemble);
/// Columns n, then dB_0 .. dB_{r-1}.
void write_increments_csv(std::ostream& out, const BrownianPath& path);
BrownianPath read_increments_csv(std::istream& in, double dt);

}  // namespace hermflow
