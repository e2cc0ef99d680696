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
#include "hermflow/report.hpp"
#include "hermflow/semigroup.hpp"
#include "hermflow/solutions.hpp"

namespace hermflow {

/// Stochastic checks pass when |r| <= sigma_multiplier * sigma + allowance,
/// the allowance being allowance_c * sqrt(dt) for pathwise identities.
struct PassRule {
  double sigma_multiplier = 3.0;
  double allowance_c = 1.0;
};

/// r(t_n) = <Y_{t_n}, phi> - <psi, phi> - sum_{m<n} <Y_{t_m}, L phi> dt
///          - sum_i sum_{m<n} <Y_{t_m}, A_i phi> dB_i[m]
/// with Y = Z(psi) on the ensemble's omega and every pairing evaluated
/// directly on the flow. Bound per time: allowance_c sqrt(dt).
VerificationReport strong_residual(const InitialCondition& psi, const TestFunction& phi,
                                   const FlowEnsemble& ensemble, const PassRule& rule = {});

/// Pathwise mild residual
///   r(t_n) = <Y_{t_n}, phi> - <psi, S_{t_n} phi>
///            - sum_i sum_{m<n} <Y_{t_m}, A_i S_{t_n - t_m} phi> dB_i[m],
/// the dual terms <S*_{t-s} A_i^* Y_s, phi> being evaluated as
/// <Y_s, A_i S_{t-s} phi>. Statistical errors of the evaluator are
/// propagated into sigma. Cost is O(steps^2) evaluator calls.
VerificationReport mild_residual_pathwise(const InitialCondition& psi, const TestFunction& phi,
                                          const FlowEnsemble& ensemble,
                                          const SemigroupEvaluator& semigroup,
                                          const PassRule& rule = {});

/// Expectation form: E<Y_t, phi> from `paths` direct pairings against
/// <S_t^* psi, P_N phi> from an independent set of `paths` ensembles (the
/// estimator behind dual_semigroup_coeffs). Bound sigma_multiplier * sigma.
VerificationReport mild_residual_expectation(const InitialCondition& psi, const TestFunction& phi,
                                             const SdeModel& model, const std::vector<double>& times,
                                             int paths, double dt, int trunc, std::uint64_t seed,
                                             const PassRule& rule = {});

struct MartingaleSample {
  double residual = 0.0;
  double sigma = 0.0;
};

/// f(X(t, x)) - S_t f(x) - sum_i sum_m (A_i S_{t - t_m} f)(X(t_m, x)) dB_i[m]
/// for the first node x of the ensemble. On an exact OU ensemble the step
/// integral uses the exponential rule
///   integral over [t_m, t_{m+1}] of g e^{-lambda (t - u)} dB = g e^{-lambda (t - t_{m+1})} I_m,
/// which is exact when A_i S_{t-u} f does not depend on the state.
MartingaleSample martingale_repr_residual(const TestFunction& f, const FlowEnsemble& ensemble,
                                          double t, const SemigroupEvaluator& semigroup);

struct MartingaleOptions {
  int paths = 100;
  double dt = 1e-3;
  bool exact_ou = false;    // drive the flow by simulate_ou_exact
  double exact_tolerance = 1e-10;  // per path, exact_ou only
  PassRule rule;
};

/// Runs martingale_repr_residual on independent paths. Series entries are
/// per path, with t holding the path index. Pass: every |r| <= exact_tolerance when exact_ou, otherwise
/// RMS <= sigma_multiplier * RMS(sigma) + allowance_c sqrt(dt).
VerificationReport martingale_check(const TestFunction& f, const SdeModel& model, const Point& x,
                                    double t, const SemigroupEvaluator& semigroup,
                                    const MartingaleOptions& opts, std::uint64_t seed);

struct GeneratorOptions {
  bool control_variate = false;  // subtract sum <Y, A_i phi> dB (mean zero)
  PassRule rule;
};

/// <S_t^* psi - S_s^* psi, phi> - integral_s^t <S_u^* psi, L phi> du by
/// Monte Carlo over `paths` ensembles, time integral by the trapezoid rule
/// on the grid. Single series entry at t; bound 3 sigma + allowance_c dt^2.
VerificationReport generator_identity_residual(const InitialCondition& psi, const TestFunction& phi,
                                               const SdeModel& model, double s, double t, int paths,
                                               double dt, std::uint64_t seed,
                                               const GeneratorOptions& opts = {});

struct TvOptions {
  int levels = 4;          // refinement levels
  int base_intervals = 2;  // intervals on the coarsest level, doubled per level
  double q = 1.0;          // reporting index: norms in S_{-q}
  int trunc = 60;
  bool control_variate = true;  // remove the martingale part path by path
};

struct TvResult {
  std::vector<int> intervals;
  std::vector<double> variation;
  std::vector<double> times;              // finest grid
  std::vector<CoeffVector> dual_coeffs;   // S_t^* psi on the finest grid
};

/// sum_i ||S*_{t_{i+1}} psi - S*_{t_i} psi||_{-q} over dyadic partitions of
/// [0, T]. All levels share one set of paths; with the control variate each
/// path contributes Z_t(psi) minus its martingale part, which has the same
/// mean and far smaller variance of increments.
TvResult semigroup_tv_estimate(const InitialCondition& psi, const SdeModel& model, double horizon,
                               int paths, double dt, std::uint64_t seed, const TvOptions& opts = {});

/// For grid times t_n < tau_R: <Z_{t_n}(psi), phi_out> evaluated directly
/// must be exactly 0 (phi_out supported outside B(0, R)). The truncated
/// coefficient pairing is reported as leakage and must stay below
/// leakage_tolerance.
/// int_0^T ||S_u^* L^* psi||_{-q} du at truncation N, with the coefficients
/// <psi, S_u L h_k> taken from `semigroup`. Bounds the total variation of
/// t -> S_t^* psi. The substitution u = T s^2 resolves the layer at u = 0.
/// psi must be a delta, a smooth datum or a combination of those.
double tv_integral_bound(const InitialCondition& psi, const SemigroupEvaluator& semigroup,
                         double horizon, double q, int trunc, int panels = 16);

VerificationReport support_containment_check(const InitialCondition& psi,
                                             const FlowEnsemble& ensemble, double radius,
                                             const TestFunction& phi_out, int trunc,
                                             double leakage_tolerance = 1e-4);

}  // namespace hermflow
