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

// One line per acceptance criterion. Criteria can be run one at a time with
// --criterion N; the exit status is 0 iff every selected criterion passed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hermflow/flow.hpp"
#include "hermflow/hermite.hpp"
#include "hermflow/monotonicity.hpp"
#include "hermflow/operator_matrix.hpp"
#include "hermflow/operators.hpp"
#include "hermflow/residuals.hpp"
#include "hermflow/rng.hpp"
#include "hermflow/sobolev.hpp"
#include "harness/runner.hpp"
#include "harness/study.hpp"

namespace {

using namespace hermflow;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

std::uint64_t g_seed = 20261018;

// --- 1 -------------------------------------------------------------------

Outcome basis_integrity() {
  const QuadratureRule gh = gauss_hermite_rule(60);
  const int n = 40;
  std::vector<std::vector<double>> h;
  for (std::size_t q = 0; q < gh.size(); ++q) h.push_back(hermite_eval_1d(n, gh.nodes[q]));
  double ortho = 0.0;
  for (int j = 0; j <= n; ++j) {
    for (int k = 0; k <= n; ++k) {
      double s = 0.0;
      for (std::size_t q = 0; q < gh.size(); ++q) {
        s += gh.lebesgue_weights[q] * h[q][static_cast<std::size_t>(j)] * h[q][static_cast<std::size_t>(k)];
      }
      ortho = std::max(ortho, std::abs(s - (j == k)));
    }
  }
  const OperatorMatrix lad = ladder_matrix(LadderKind::Differentiate, 0, n, 1);
  const OperatorMatrix gal = assemble_galerkin(OperatorTag::Derivative, 0, gaussian_model(1), n, gh);
  double ladder = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) ladder = std::max(ladder, std::abs(lad.matrix(i, j) - gal.matrix(i, j)));
  }
  return {ortho < 1e-10 && ladder < 1e-10,
          fmt("orthonormality %.2e, ladder vs Galerkin %.2e (tol 1e-10)", ortho, ladder)};
}

// --- 2 -------------------------------------------------------------------

Outcome membership_threshold() {
  const int nmax = 4000;
  const auto conv = membership_profile(MultiIndex{0}, point1(0.0), 0.5, nmax);
  const auto crit = membership_profile(MultiIndex{0}, point1(0.0), 0.25, nmax);
  const double s_conv = log_increment_slope(conv, 100);
  const double s_crit = log_increment_slope(crit, 100);
  return {s_conv < -1.0 && std::abs(s_crit + 1.0) <= 0.1,
          fmt("slope p=0.5: %.4f (< -1), p=0.25: %.4f (-1 +- 0.1)", s_conv, s_crit)};
}

// --- 3 -------------------------------------------------------------------

Outcome monotonicity_identity() {
  MonotonicityCheckOptions opts;
  opts.trials = 50;
  opts.seed = g_seed;
  bool ok = true;
  std::string detail;
  for (const SdeModel& m : {gaussian_model(1), ou_model(0.8, 0.5), trig_model()}) {
    const VerificationReport r = monotonicity_check(m, opts);
    const double defect = r.diagnostic("worst_identity_defect");
    const double lo = r.diagnostic("min_ratio");
    const double hi = r.diagnostic("max_ratio");
    bool model_ok = r.pass && defect < 1e-5;
    if (m.family == ModelFamily::OrnsteinUhlenbeck) {
      model_ok = model_ok && std::abs(lo - 0.8) <= 1e-4 && std::abs(hi - 0.8) <= 1e-4;
    }
    if (m.family == ModelFamily::Trig) model_ok = model_ok && hi <= 1.5 + 1e-4;
    ok = ok && model_ok;
    detail += fmt("%s defect %.1e ratio [%.4f, %.4f]; ", m.name.c_str(), defect, lo, hi);
  }
  return {ok, detail};
}

// --- 4 -------------------------------------------------------------------

Outcome strong_solution() {
  bool ok = true;
  std::string detail;
  for (const char* model : {"gaussian", "ou", "trig"}) {
    harness::ScenarioConfig cfg = harness::default_config(model);
    cfg.seed = g_seed;
    cfg.paths = 200;
    cfg.dt = 1e-3;
    cfg.steps = 500;
    cfg.psi_kind = "delta";
    cfg.psi_point = 0.3;
    cfg.phi = "h0";
    const harness::StudyResult r = harness::convergence_study(cfg, {4e-3, 2e-3, 1e-3});
    ok = ok && r.pass;
    detail += fmt("%s slope %.3f (>= %.1f); ", model, r.slope, r.expected_slope);
  }
  const InitialCondition psi = delta_initial(point1(0.3));
  const FlowEnsemble frozen = simulate_flow(frozen_model(1), psi.ensemble_nodes(), 0.5, 1e-3, g_seed, 0);
  const double f = strong_residual(psi, hermite_test_function(MultiIndex{0}), frozen).max_abs;
  ok = ok && f == 0.0;
  detail += fmt("frozen %.1e", f);
  return {ok, detail};
}

// --- 5 -------------------------------------------------------------------

Outcome mild_expectation() {
  bool ok = true;
  std::string detail;
  const InitialCondition psi = delta_initial(point1(0.0));
  const TestFunction h0 = hermite_test_function(MultiIndex{0});
  for (const SdeModel& m : {gaussian_model(1), ou_model(0.8, 0.5)}) {
    const VerificationReport r =
        mild_residual_expectation(psi, h0, m, {0.25, 0.5}, 10000, 1e-3, 60, g_seed);
    for (const auto& s : r.series) {
      ok = ok && std::abs(s.residual) < 3.0 * s.sigma;
      detail += fmt("%s t=%.2f %.2f sigma; ", m.name.c_str(), s.t, std::abs(s.residual) / s.sigma);
    }
  }
  return {ok, detail};
}

// --- 6 -------------------------------------------------------------------

Outcome mild_pathwise() {
  const SdeModel ou = ou_model(0.8, 0.5);
  const GaussianTransitionSemigroup sg(ou);
  const InitialCondition psi = delta_initial(point1(0.0));
  const TestFunction lin = linear_function(point1(1.0), 0.0);
  int failed = 0;
  double worst = 0.0;
  for (int p = 0; p < 50; ++p) {
    const FlowEnsemble e = simulate_flow(ou, psi.ensemble_nodes(), 0.5, 1e-3, g_seed, static_cast<std::uint64_t>(p));
    const VerificationReport r = mild_residual_pathwise(psi, lin, e, sg);
    if (!r.pass) ++failed;
    worst = std::max(worst, r.max_abs);
  }
  return {failed == 0, fmt("failed paths %d/50, worst |r| %.2e (allowance %.2e)", failed, worst, std::sqrt(1e-3))};
}

// --- 7 -------------------------------------------------------------------

Outcome martingale_representation() {
  const SdeModel ou = ou_model(0.8, 0.5);
  MartingaleOptions exact;
  exact.paths = 100;
  exact.exact_ou = true;
  const VerificationReport a = martingale_check(linear_function(point1(1.0), 0.0), ou, point1(0.4), 0.5,
                                                GaussianTransitionSemigroup(ou), exact, g_seed);
  const SdeModel g = gaussian_model(1);
  MartingaleOptions plain;
  plain.paths = 100;
  const VerificationReport b = martingale_check(bump_function(1.0, 0.0, 1.5), g, point1(0.2), 0.5,
                                                GaussianTransitionSemigroup(g), plain, g_seed);
  return {a.pass && a.max_abs < 1e-10 && b.pass,
          fmt("ou exact max %.1e (< 1e-10); gaussian rms %.2e (bound %.2e)", a.max_abs, b.rms, b.tolerance)};
}

// --- 8 -------------------------------------------------------------------

Outcome generator_identity() {
  GeneratorOptions cv;
  cv.control_variate = true;
  const VerificationReport g =
      generator_identity_residual(delta_initial(point1(0.0)), hermite_test_function(MultiIndex{0}),
                                  gaussian_model(1), 0.25, 0.5, 100000, 1e-3, g_seed, cv);
  const VerificationReport o =
      generator_identity_residual(delta_initial(point1(1.0)), linear_function(point1(1.0), 0.0),
                                  ou_model(0.8, 0.5), 0.25, 0.5, 100000, 1e-3, g_seed);
  const SeriesPoint& gs = g.series.front();
  const SeriesPoint& os = o.series.front();
  return {std::abs(gs.residual) < 1e-3 && std::abs(os.residual) <= 3.0 * os.sigma,
          fmt("gaussian |r| %.2e (< 1e-3); ou |r| %.2e vs 3 sigma %.2e", std::abs(gs.residual),
              std::abs(os.residual), 3.0 * os.sigma)};
}

// --- 9 -------------------------------------------------------------------

Outcome support_containment() {
  const InitialCondition psi = bump_initial(1.0, 0.0, 1.0);
  const double radius = 1.5;
  const TestFunction outside = bump_function(1.0, 3.0, 1.5);
  const std::vector<double> ladder = {1.5, 2.0, 2.5, 3.0, 4.0};
  bool ok = true;
  double leak = 0.0, direct = 0.0;
  int hit = 0;
  for (int p = 0; p < 20; ++p) {
    const FlowEnsemble e = simulate_flow(gaussian_model(1), psi.ensemble_nodes(), 0.5, 1e-3, g_seed,
                                         static_cast<std::uint64_t>(p));
    const VerificationReport r = support_containment_check(psi, e, radius, outside, 60, 1e-4);
    ok = ok && r.pass;
    leak = std::max(leak, r.diagnostic("max_leakage"));
    direct = std::max(direct, r.max_abs);
    if (std::isfinite(r.diagnostic("tau_R"))) ++hit;
    double prev = 0.0;
    for (double rr : ladder) {
      const double tau = hitting_time(e, psi.support_radius(), rr);
      ok = ok && tau >= prev;
      prev = tau;
    }
  }
  ok = ok && direct == 0.0 && leak < 1e-4;
  return {ok, fmt("direct max %.1e, leakage %.2e (< 1e-4), paths reaching R: %d/20", direct, leak, hit)};
}

// --- 10 ------------------------------------------------------------------

Outcome flow_engine() {
  double comp = 0.0;
  for (const SdeModel& m : {gaussian_model(1), ou_model(0.8, 0.5), trig_model()}) {
    for (double x : {-1.0, 0.3, 2.0}) {
      comp = std::max(comp, flow_composition_residual(m, point1(x), 0.25, 0.25, 1e-3, g_seed));
    }
  }
  const SdeModel ou = ou_model(1.0, 0.5);
  double err[3] = {0.0, 0.0, 0.0};
  for (int p = 0; p < 200; ++p) {
    const OuExactNoise noise =
        OuExactNoise::generate(1.0, 1, 2.5e-4, 4000, g_seed, derive_stream(g_seed, "acceptance-ou", p));
    for (int l = 0; l < 3; ++l) {
      const OuExactNoise level = l == 2 ? noise : noise.coarsen(1 << (2 - l));
      const FlowEnsemble em = simulate_flow(ou, {point1(0.7)}, level.path);
      const FlowEnsemble ex = simulate_ou_exact(ou, {point1(0.7)}, level);
      double m = 0.0;
      for (int n = 0; n <= em.steps(); ++n) m = std::max(m, std::abs(em.position(n, 0)[0] - ex.position(n, 0)[0]));
      err[l] += m;
    }
  }
  const double r1 = err[0] / err[1], r2 = err[1] / err[2];
  bool sign = true;
  for (int p = 0; p < 50 && sign; ++p) {
    try {
      const FlowEnsemble e = simulate_flow(trig_model(), {point1(-2.0), point1(0.0), point1(1.5)}, 0.5,
                                           1e-3, g_seed, static_cast<std::uint64_t>(p));
      for (const auto& j : e.jacobians) sign = sign && j(0, 0) > 0.0;
    } catch (const std::runtime_error&) {
      sign = false;
    }
  }
  const bool ok = comp == 0.0 && std::abs(r1 - 2.0) <= 0.6 && std::abs(r2 - 2.0) <= 0.6 && sign;
  return {ok, fmt("composition %.1e, OU error ratios %.3f %.3f (2 +- 30%%), Jacobian sign %s", comp, r1, r2,
                  sign ? "constant" : "changed")};
}

// --- 11 ------------------------------------------------------------------

// int_0^T ||S_u^* L^* delta_0||_{-1} du for a Gaussian transition law,
// computed directly: X_u ~ N(0, v(u)) and (L h_k)(x) = -lambda x h_k' +
// (s^2/2) h_k''.
double tv_bound_oracle(double lambda, double s, double horizon, int trunc) {
  const QuadratureRule gh = gauss_hermite_rule(96);
  auto variance = [&](double u) {
    return lambda == 0.0 ? s * s * u : s * s * (1.0 - std::exp(-2.0 * lambda * u)) / (2.0 * lambda);
  };
  const QuadratureRule outer = composite_gauss_legendre(10, 24, 0.0, 1.0);
  double total = 0.0;
  for (std::size_t i = 0; i < outer.size(); ++i) {
    const double r = outer.nodes[i];
    const double u = horizon * r * r;
    const double sd = std::sqrt(variance(u));
    std::vector<double> c(static_cast<std::size_t>(trunc) + 1, 0.0);
    for (std::size_t q = 0; q < gh.size(); ++q) {
      const double x = std::sqrt(2.0) * sd * gh.nodes[q];
      const double w = gh.weights[q] / std::sqrt(std::numbers::pi);
      const HermiteJet jet = hermite_jet_1d(trunc, x);
      for (int k = 0; k <= trunc; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        c[kk] += w * (-lambda * x * jet.first[kk] + 0.5 * s * s * jet.second[kk]);
      }
    }
    double norm2 = 0.0;
    for (int k = 0; k <= trunc; ++k) norm2 += c[static_cast<std::size_t>(k)] * c[static_cast<std::size_t>(k)] / std::pow(2.0 * k + 1.0, 2.0);
    total += outer.weights[i] * std::sqrt(norm2) * 2.0 * horizon * r;
  }
  return total;
}

Outcome finite_variation() {
  bool ok = true;
  std::string detail;
  const InitialCondition psi = delta_initial(point1(0.0));
  struct Case {
    SdeModel model;
    double lambda, s;
  };
  for (const Case& c : {Case{gaussian_model(1), 0.0, 1.0}, Case{ou_model(0.8, 0.5), 0.8, 0.5}}) {
    const TvResult tv = semigroup_tv_estimate(psi, c.model, 0.5, 2000, 1.0 / 1024.0, g_seed);
    const double bound = tv_bound_oracle(c.lambda, c.s, 0.5, 60);
    const std::size_t last = tv.variation.size() - 1;
    const double change = std::abs(tv.variation[last] - tv.variation[last - 1]) / tv.variation[last];
    ok = ok && tv.variation.size() == 4 && change < 0.1 && tv.variation[last] < 1.1 * bound;
    detail += fmt("%s TV %.4f %.4f %.4f %.4f, change %.1f%%, bound %.4f; ", c.model.name.c_str(),
                  tv.variation[0], tv.variation[1], tv.variation[2], tv.variation[3], 100.0 * change, bound);
  }
  return {ok, detail};
}

// --- 12 ------------------------------------------------------------------

Outcome reproducibility() {
  harness::ScenarioConfig cfg = harness::default_config("trig");
  cfg.seed = g_seed;
  cfg.paths = 40;
  cfg.steps = 128;
  cfg.out_dir = "unused";
  const char* saved = std::getenv("HERMFLOW_THREADS");
  const std::string restore = saved ? saved : "";
  bool ok = true;
  std::string detail;
  for (const char* id : {"strong", "mild", "martingale", "support", "flow"}) {
    setenv("HERMFLOW_THREADS", "1", 1);
    const std::string a = harness::run_identity(id, cfg).to_json(false);
    setenv("HERMFLOW_THREADS", "4", 1);
    const std::string b = harness::run_identity(id, cfg).to_json(false);
    ok = ok && a == b;
    detail += fmt("%s %s; ", id, a == b ? "identical" : "DIFFERS");
  }
  if (saved) {
    setenv("HERMFLOW_THREADS", restore.c_str(), 1);
  } else {
    unsetenv("HERMFLOW_THREADS");
  }
  return {ok, detail};
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hermflow acceptance criteria"};
  std::vector<int> selected;
  app.add_option("--criterion", selected, "criterion number(s) to run; default all")->check(CLI::Range(1, 12));
  app.add_option("--seed", g_seed, "master seed");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "basis integrity", basis_integrity},
      {2, "membership threshold", membership_threshold},
      {3, "monotonicity identity", monotonicity_identity},
      {4, "strong solution rates", strong_solution},
      {5, "mild solution, expectation", mild_expectation},
      {6, "mild solution, pathwise", mild_pathwise},
      {7, "martingale representation", martingale_representation},
      {8, "generator identity", generator_identity},
      {9, "support containment", support_containment},
      {10, "flow engine", flow_engine},
      {11, "finite variation", finite_variation},
      {12, "reproducibility", reproducibility},
  };
  bool all = true;
  for (const auto& c : criteria) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2d %s: %s [%.1f s] %s\n", c.id, o.pass ? "PASS" : "FAIL", c.title, secs,
                o.detail.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
