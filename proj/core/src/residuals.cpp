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

#include "hermflow/residuals.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hermflow/operators.hpp"
#include "hermflow/parallel.hpp"
#include "hermflow/quadrature.hpp"
#include "hermflow/rng.hpp"

namespace hermflow {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<ScalarField> diffusion_images(const SdeModel& model, const TestFunction& phi) {
  std::vector<ScalarField> out;
  for (int i = 0; i < model.noise_dim; ++i) {
    out.push_back(apply_operator_pointwise(OperatorTag::Diffusion, i, model, phi));
  }
  return out;
}

int steps_or_zero(double t, double dt) { return t == 0.0 ? 0 : step_count(t, dt); }

// Projection rule for a test function: Legendre over the support when it is
// compact, Gauss-Hermite otherwise.
QuadratureRule projection_rule(const TestFunction& phi, int trunc) {
  if (phi.compactly_supported()) {
    const double lo = phi.support_center.minCoeff() - phi.support_radius;
    const double hi = phi.support_center.maxCoeff() + phi.support_radius;
    const int panels = phi.dim == 1 ? 32 : 8;
    return tensor_rule(composite_gauss_legendre(12, panels, lo, hi), phi.dim);
  }
  return tensor_rule(gauss_hermite_rule(trunc + 16), phi.dim);
}

void describe(VerificationReport& report, const char* identity, const SdeModel& model,
              std::uint64_t seed) {
  report.identity = identity;
  report.scenario = model.name;
  report.seed = seed;
}

}  // namespace

VerificationReport strong_residual(const InitialCondition& psi, const TestFunction& phi,
                                   const FlowEnsemble& ensemble, const PassRule& rule) {
  const auto start = Clock::now();
  const SdeModel& model = ensemble.model;
  VerificationReport report;
  describe(report, "strong", model, ensemble.path.seed);
  report.add_param("dt", ensemble.dt());
  report.add_param("steps", ensemble.steps());
  report.add_param("allowance_c", rule.allowance_c);
  const double bound = rule.allowance_c * std::sqrt(ensemble.dt());
  report.tolerance = bound;

  const FlowPairing pairing(psi, ensemble);
  const ScalarField lphi = apply_operator_pointwise(OperatorTag::Generator, 0, model, phi);
  const std::vector<ScalarField> aphi = diffusion_images(model, phi);
  const double base = pairing.pair(0, phi);
  double drift = 0.0;
  double noise = 0.0;
  report.series.push_back({0.0, pairing.pair(0, phi) - base, 0.0, bound});
  for (int n = 0; n < ensemble.steps(); ++n) {
    drift += pairing.pair(n, lphi) * ensemble.dt();
    for (int i = 0; i < model.noise_dim; ++i) {
      noise += pairing.pair(n, aphi[static_cast<std::size_t>(i)]) * ensemble.path.increment(n, i);
    }
    const double r = pairing.pair(n + 1, phi) - base - drift - noise;
    report.series.push_back({ensemble.time(n + 1), r, 0.0, bound});
  }
  report.finalize();
  report.runtime_seconds = seconds_since(start);
  return report;
}

VerificationReport mild_residual_pathwise(const InitialCondition& psi, const TestFunction& phi,
                                          const FlowEnsemble& ensemble,
                                          const SemigroupEvaluator& semigroup,
                                          const PassRule& rule) {
  const auto start = Clock::now();
  const SdeModel& model = ensemble.model;
  VerificationReport report;
  describe(report, "mild-pathwise", model, ensemble.path.seed);
  report.add_param("dt", ensemble.dt());
  report.add_param("steps", ensemble.steps());
  report.add_param("allowance_c", rule.allowance_c);
  report.add_param("sigma_multiplier", rule.sigma_multiplier);
  const double allowance = rule.allowance_c * std::sqrt(ensemble.dt());
  report.tolerance = allowance;

  const FlowPairing pairing(psi, ensemble);
  const int steps = ensemble.steps();
  std::vector<std::vector<Point>> points(static_cast<std::size_t>(steps) + 1);
  std::vector<std::vector<double>> weights(points.size());
  for (int n = 0; n <= steps; ++n) {
    pairing.atoms(n, points[static_cast<std::size_t>(n)], weights[static_cast<std::size_t>(n)]);
  }
  std::vector<SeriesPoint> series(points.size());
  parallel_for(series.size(), [&](std::size_t idx) {
    const int n = static_cast<int>(idx);
    const double lhs = pairing.pair(n, phi);
    const Estimate dual = semigroup.pair_value(phi, ensemble.time(n), points[0], weights[0],
                                               derive_stream(ensemble.id, "mild-dual", idx));
    double var = dual.std_error * dual.std_error;
    double noise = 0.0;
    for (int m = 0; m < n; ++m) {
      const std::size_t sm = static_cast<std::size_t>(m);
      const std::vector<Estimate> a =
          semigroup.pair_diffusion(phi, ensemble.time(n - m), points[sm], weights[sm],
                                   derive_stream(ensemble.id, "mild", idx, sm));
      for (int i = 0; i < model.noise_dim; ++i) {
        const double db = ensemble.path.increment(m, i);
        const Estimate& e = a[static_cast<std::size_t>(i)];
        noise += e.value * db;
        var += e.std_error * e.std_error * db * db;
      }
    }
    const double sigma = std::sqrt(var);
    series[idx] = {ensemble.time(n), lhs - dual.value - noise, sigma,
                   rule.sigma_multiplier * sigma + allowance};
  });
  report.series = std::move(series);
  report.finalize();
  report.runtime_seconds = seconds_since(start);
  return report;
}

VerificationReport mild_residual_expectation(const InitialCondition& psi, const TestFunction& phi,
                                             const SdeModel& model, const std::vector<double>& times,
                                             int paths, double dt, int trunc, std::uint64_t seed,
                                             const PassRule& rule) {
  if (paths < 2) throw std::invalid_argument("mild_residual_expectation: at least 2 paths are needed");
  const auto start = Clock::now();
  VerificationReport report;
  describe(report, "mild-expectation", model, seed);
  report.add_param("dt", dt);
  report.add_param("paths", paths);
  report.add_param("truncation", trunc);
  report.add_param("sigma_multiplier", rule.sigma_multiplier);

  const std::vector<Point> nodes = psi.ensemble_nodes();
  const CoeffVector phic = project_function(phi.value, trunc, projection_rule(phi, trunc));
  const std::uint64_t dual_seed = derive_stream(seed, "mild-dual");
  for (double t : times) {
    const int steps = steps_or_zero(t, dt);
    std::vector<double> direct(static_cast<std::size_t>(paths));
    std::vector<double> dual(static_cast<std::size_t>(paths));
    parallel_for(direct.size(), [&](std::size_t m) {
      const BrownianPath a = BrownianPath::generate(model.noise_dim, dt, steps, seed,
                                                    derive_stream(seed, "mild-outer", m));
      const FlowEnsemble ea = simulate_flow(model, nodes, a, m);
      direct[m] = FlowPairing(psi, ea).pair(steps, phi);
      // Same streams as dual_semigroup_coeffs(psi, model, t, trunc, paths, dt, dual_seed).
      const BrownianPath b = BrownianPath::generate(model.noise_dim, dt, steps, dual_seed,
                                                    derive_stream(dual_seed, "dual", m));
      const FlowEnsemble eb = simulate_flow(model, nodes, b, m);
      dual[m] = FlowPairing(psi, eb).coeffs(steps, trunc).values().dot(phic.values());
    });
    const Estimate lhs = sample_estimate(direct);
    const Estimate rhs = sample_estimate(dual);
    const double sigma = std::hypot(lhs.std_error, rhs.std_error);
    report.series.push_back({t, lhs.value - rhs.value, sigma, rule.sigma_multiplier * sigma});
  }
  report.tolerance = rule.sigma_multiplier;
  report.finalize();
  report.runtime_seconds = seconds_since(start);
  return report;
}

MartingaleSample martingale_repr_residual(const TestFunction& f, const FlowEnsemble& ensemble,
                                          double t, const SemigroupEvaluator& semigroup) {
  const int nt = steps_or_zero(t, ensemble.dt());
  if (nt > ensemble.steps()) throw std::invalid_argument("martingale_repr_residual: t beyond the ensemble");
  const SdeModel& model = ensemble.model;
  const Point& x = ensemble.nodes.front();
  const std::uint64_t id = ensemble.id;
  const Estimate mean = semigroup.pair_value(f, t, {x}, {1.0}, derive_stream(id, "martingale-mean"));
  double var = mean.std_error * mean.std_error;
  double integral = 0.0;
  const std::size_t r = static_cast<std::size_t>(model.noise_dim);
  for (int m = 0; m < nt; ++m) {
    const Point& y = ensemble.position(m, 0);
    const std::size_t sm = static_cast<std::size_t>(m);
    if (ensemble.exact_ou) {
      const std::vector<Estimate> a = semigroup.pair_diffusion(
          f, ensemble.time(nt - m - 1), {y}, {1.0}, derive_stream(id, "martingale", sm));
      for (std::size_t i = 0; i < r; ++i) {
        const double w = ensemble.ou_integrals[sm * r + i];
        integral += a[i].value * w;
        var += a[i].std_error * a[i].std_error * w * w;
      }
    } else {
      const std::vector<Estimate> a = semigroup.pair_diffusion(
          f, ensemble.time(nt - m), {y}, {1.0}, derive_stream(id, "martingale", sm));
      for (std::size_t i = 0; i < r; ++i) {
        const double db = ensemble.path.increment(m, static_cast<int>(i));
        integral += a[i].value * db;
        var += a[i].std_error * a[i].std_error * db * db;
      }
    }
  }
  return {f(ensemble.position(nt, 0)) - mean.value - integral, std::sqrt(var)};
}

VerificationReport martingale_check(const TestFunction& f, const SdeModel& model, const Point& x,
                                    double t, const SemigroupEvaluator& semigroup,
                                    const MartingaleOptions& opts, std::uint64_t seed) {
  if (opts.paths < 1) throw std::invalid_argument("martingale_check: paths must be positive");
  const auto start = Clock::now();
  VerificationReport report;
  describe(report, opts.exact_ou ? "martingale-exact" : "martingale", model, seed);
  report.add_param("t", t);
  report.add_param("dt", opts.dt);
  report.add_param("paths", opts.paths);
  const int steps = steps_or_zero(t, opts.dt);
  std::vector<MartingaleSample> samples(static_cast<std::size_t>(opts.paths));
  parallel_for(samples.size(), [&](std::size_t p) {
    const std::uint64_t stream = derive_stream(seed, "martingale", p);
    if (opts.exact_ou) {
      const OuExactNoise noise =
          OuExactNoise::generate(model.parameter("lambda"), model.noise_dim, opts.dt, steps, seed, stream);
      samples[p] = martingale_repr_residual(f, simulate_ou_exact(model, {x}, noise, p), t, semigroup);
    } else {
      const BrownianPath path = BrownianPath::generate(model.noise_dim, opts.dt, steps, seed, stream);
      samples[p] = martingale_repr_residual(f, simulate_flow(model, {x}, path, p), t, semigroup);
    }
  });
  double sum_r2 = 0.0;
  double sum_s2 = 0.0;
  for (const auto& s : samples) {
    sum_r2 += s.residual * s.residual;
    sum_s2 += s.sigma * s.sigma;
  }
  const double count = static_cast<double>(samples.size());
  const double rms = std::sqrt(sum_r2 / count);
  const double rms_sigma = std::sqrt(sum_s2 / count);
  double bound = opts.exact_tolerance;
  if (!opts.exact_ou) {
    bound = opts.rule.sigma_multiplier * rms_sigma + opts.rule.allowance_c * std::sqrt(opts.dt);
  }
  const double per_path = opts.exact_ou ? bound : std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < samples.size(); ++p) {
    report.series.push_back({static_cast<double>(p), samples[p].residual, samples[p].sigma, per_path});
  }
  report.tolerance = bound;
  report.add_diagnostic("rms_sigma", rms_sigma);
  report.add_diagnostic("rms_bound", bound);
  report.finalize(opts.exact_ou || rms <= bound);
  report.runtime_seconds = seconds_since(start);
  return report;
}

VerificationReport generator_identity_residual(const InitialCondition& psi, const TestFunction& phi,
                                               const SdeModel& model, double s, double t, int paths,
                                               double dt, std::uint64_t seed,
                                               const GeneratorOptions& opts) {
  if (s > t) throw std::invalid_argument("generator_identity_residual: s > t");
  if (paths < 2) throw std::invalid_argument("generator_identity_residual: at least 2 paths are needed");
  const auto start = Clock::now();
  VerificationReport report;
  describe(report, "generator", model, seed);
  report.add_param("s", s);
  report.add_param("t", t);
  report.add_param("dt", dt);
  report.add_param("paths", paths);
  report.add_param("control_variate", opts.control_variate ? 1.0 : 0.0);
  const double allowance = opts.rule.allowance_c * dt * dt;
  if (s == t) {
    report.series.push_back({t, 0.0, 0.0, allowance});
    report.finalize();
    return report;
  }
  const int ns = steps_or_zero(s, dt);
  const int nt = step_count(t, dt);
  const std::vector<Point> nodes = psi.ensemble_nodes();
  const ScalarField lphi = apply_operator_pointwise(OperatorTag::Generator, 0, model, phi);
  const std::vector<ScalarField> aphi = diffusion_images(model, phi);
  std::vector<double> lhs(static_cast<std::size_t>(paths));
  std::vector<double> rhs(lhs.size());
  std::vector<double> diff(lhs.size());
  parallel_for(lhs.size(), [&](std::size_t m) {
    const BrownianPath path = BrownianPath::generate(model.noise_dim, dt, nt, seed,
                                                     derive_stream(seed, "generator", m));
    const FlowEnsemble e = simulate_flow(model, nodes, path, m);
    const FlowPairing pairing(psi, e);
    double integral = 0.0;
    for (int n = ns; n <= nt; ++n) {
      const double w = (n == ns || n == nt) ? 0.5 : 1.0;
      integral += w * pairing.pair(n, lphi);
    }
    integral *= dt;
    double change = pairing.pair(nt, phi) - pairing.pair(ns, phi);
    if (opts.control_variate) {
      for (int n = ns; n < nt; ++n) {
        for (int i = 0; i < model.noise_dim; ++i) {
          change -= pairing.pair(n, aphi[static_cast<std::size_t>(i)]) * path.increment(n, i);
        }
      }
    }
    lhs[m] = change;
    rhs[m] = integral;
    diff[m] = change - integral;
  });
  const Estimate r = sample_estimate(diff);
  report.series.push_back({t, r.value, r.std_error, opts.rule.sigma_multiplier * r.std_error + allowance});
  report.add_diagnostic("lhs", sample_estimate(lhs).value);
  report.add_diagnostic("rhs", sample_estimate(rhs).value);
  report.tolerance = allowance;
  report.finalize();
  report.runtime_seconds = seconds_since(start);
  return report;
}

TvResult semigroup_tv_estimate(const InitialCondition& psi, const SdeModel& model, double horizon,
                               int paths, double dt, std::uint64_t seed, const TvOptions& opts) {
  if (opts.levels < 2) throw std::invalid_argument("semigroup_tv_estimate: at least 2 levels are needed");
  if (opts.base_intervals < 1) throw std::invalid_argument("semigroup_tv_estimate: base_intervals < 1");
  if (paths < 1) throw std::invalid_argument("semigroup_tv_estimate: paths must be positive");
  const int finest = opts.base_intervals << (opts.levels - 1);
  const int stride = step_count(horizon / finest, dt);
  const int steps = stride * finest;
  const std::vector<Point> nodes = psi.ensemble_nodes();
  const Eigen::Index size = static_cast<Eigen::Index>(basis_size(model.dim, opts.trunc));

  // Fixed chunks keep the reduction order independent of the thread count.
  constexpr std::size_t kChunk = 64;
  const std::size_t chunks = (static_cast<std::size_t>(paths) + kChunk - 1) / kChunk;
  std::vector<std::vector<Eigen::VectorXd>> partial(
      chunks, std::vector<Eigen::VectorXd>(static_cast<std::size_t>(finest) + 1, Eigen::VectorXd::Zero(size)));
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t end = std::min<std::size_t>(static_cast<std::size_t>(paths), (c + 1) * kChunk);
    for (std::size_t m = c * kChunk; m < end; ++m) {
      const BrownianPath path = BrownianPath::generate(model.noise_dim, dt, steps, seed,
                                                       derive_stream(seed, "tv", m));
      const FlowEnsemble e = simulate_flow(model, nodes, path, m);
      const FlowPairing pairing(psi, e);
      Eigen::VectorXd martingale = Eigen::VectorXd::Zero(size);
      for (int n = 0; n <= steps; ++n) {
        if (n % stride == 0) {
          partial[c][static_cast<std::size_t>(n / stride)] += pairing.coeffs(n, opts.trunc).values() - martingale;
        }
        if (opts.control_variate && n < steps) {
          martingale += pairing.martingale_increment(n, opts.trunc).values();
        }
      }
    }
  });
  TvResult out;
  for (int i = 0; i <= finest; ++i) {
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(size);
    for (const auto& chunk : partial) sum += chunk[static_cast<std::size_t>(i)];
    out.times.push_back(horizon * i / finest);
    out.dual_coeffs.emplace_back(model.dim, opts.trunc, sum / static_cast<double>(paths));
  }
  for (int level = 0; level < opts.levels; ++level) {
    const int k = opts.base_intervals << level;
    const int jump = finest / k;
    double tv = 0.0;
    for (int i = 0; i < k; ++i) {
      tv += sobolev_norm(out.dual_coeffs[static_cast<std::size_t>((i + 1) * jump)] -
                             out.dual_coeffs[static_cast<std::size_t>(i * jump)],
                         SobolevIndex(-opts.q));
    }
    out.intervals.push_back(k);
    out.variation.push_back(tv);
  }
  return out;
}

namespace {

void value_atoms(const InitialCondition& psi, double scale, std::vector<Point>& ys,
                 std::vector<double>& ws) {
  switch (psi.kind) {
    case InitialKind::Delta:
      ys.push_back(psi.point);
      ws.push_back(scale);
      return;
    case InitialKind::Smooth:
      for (std::size_t q = 0; q < psi.rule.size(); ++q) {
        const Point y = psi.rule.node(q);
        ys.push_back(y);
        ws.push_back(scale * psi.rule.weights[q] * psi.function(y));
      }
      return;
    case InitialKind::Combination:
      for (const auto& [c, term] : psi.terms) value_atoms(term, scale * c, ys, ws);
      return;
    case InitialKind::DerivativeDelta:
      break;
  }
  throw std::invalid_argument("tv_integral_bound: derivative deltas are not supported");
}

}  // namespace

double tv_integral_bound(const InitialCondition& psi, const SemigroupEvaluator& semigroup,
                         double horizon, double q, int trunc, int panels) {
  if (!(horizon > 0.0)) throw std::invalid_argument("tv_integral_bound: horizon must be positive");
  const SdeModel& model = semigroup.model();
  std::vector<Point> ys;
  std::vector<double> ws;
  value_atoms(psi, 1.0, ys, ws);

  const MultiIndexSet set(model.dim, trunc);
  std::vector<ScalarField> images;
  images.reserve(set.size());
  for (const auto& k : set) {
    images.push_back(apply_operator_pointwise(OperatorTag::Generator, 0, model,
                                              hermite_test_function(k)));
  }
  const QuadratureRule s_rule = composite_gauss_legendre(8, panels, 0.0, 1.0);
  std::vector<double> integrand(s_rule.size());
  parallel_for(s_rule.size(), [&](std::size_t i) {
    const double s = s_rule.nodes[i];
    const double u = horizon * s * s;
    double norm2 = 0.0;
    for (std::size_t pos = 0; pos < set.size(); ++pos) {
      TestFunction f;
      f.dim = model.dim;
      f.value = images[pos];
      const double c = semigroup.pair_value(f, u, ys, ws, derive_stream(0, "tv-bound", i, pos)).value;
      norm2 += std::pow(2.0 * set.order(pos) + model.dim, -2.0 * q) * c * c;
    }
    integrand[i] = std::sqrt(norm2) * 2.0 * horizon * s;
  });
  double total = 0.0;
  for (std::size_t i = 0; i < s_rule.size(); ++i) total += s_rule.weights[i] * integrand[i];
  return total;
}

VerificationReport support_containment_check(const InitialCondition& psi,
                                             const FlowEnsemble& ensemble, double radius,
                                             const TestFunction& phi_out, int trunc,
                                             double leakage_tolerance) {
  if (!phi_out.compactly_supported() ||
      phi_out.support_center.norm() - phi_out.support_radius < radius) {
    throw std::invalid_argument("support_containment_check: phi_out must be supported outside B(0, R)");
  }
  const auto start = Clock::now();
  VerificationReport report;
  describe(report, "support", ensemble.model, ensemble.path.seed);
  report.add_param("radius", radius);
  report.add_param("truncation", trunc);
  report.add_param("leakage_tolerance", leakage_tolerance);
  report.tolerance = 0.0;

  const double lambda = psi.support_radius();
  const double tau = hitting_time(ensemble, lambda, radius);
  const FlowPairing pairing(psi, ensemble);
  const CoeffVector phic = project_function(phi_out.value, trunc, projection_rule(phi_out, trunc));
  double max_leak = 0.0;
  double first_nonzero = std::numeric_limits<double>::infinity();
  int checked = 0;
  for (int n = 0; n <= ensemble.steps(); ++n) {
    const double t = ensemble.time(n);
    const double direct = pairing.pair(n, phi_out);
    if (t < tau) {
      report.series.push_back({t, direct, 0.0, 0.0});
      const double leak = std::abs(pairing.coeffs(n, trunc).values().dot(phic.values()));
      max_leak = std::max(max_leak, leak);
      ++checked;
    } else if (direct != 0.0 && !std::isfinite(first_nonzero)) {
      first_nonzero = t;
    }
  }
  report.add_diagnostic("support_lambda", lambda);
  report.add_diagnostic("tau_R", tau);
  report.add_diagnostic("checked_times", checked);
  report.add_diagnostic("max_leakage", max_leak);
  report.add_diagnostic("first_nonzero_time", first_nonzero);
  const bool leak_ok = max_leak < leakage_tolerance;
  if (!leak_ok) report.notes.push_back("coefficient leakage above tolerance");
  report.finalize(leak_ok);
  report.runtime_seconds = seconds_since(start);
  return report;
}

}  // namespace hermflow
