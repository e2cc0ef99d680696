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

#include "hermflow/monotonicity.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "hermflow/rng.hpp"

namespace hermflow {

ScalarField monotonicity_weight(const SdeModel& model) {
  const int d = model.dim;
  const int r = model.noise_dim;
  return [model, d, r](const Point& x) {
    const SmallMatrix s = model.diffusion(x);
    std::vector<SmallMatrix> ds;
    ds.reserve(static_cast<std::size_t>(d));
    for (int l = 0; l < d; ++l) ds.push_back(model.diffusion_partial(x, l));
    double m = -model.drift_jacobian(x).trace();
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        const SmallMatrix dij = model.diffusion_second_partial(x, i, j);
        for (int k = 0; k < r; ++k) {
          // d_ij(sigma_ik sigma_jk) by the product rule
          const double prod2 = dij(i, k) * s(j, k) + ds[i](i, k) * ds[j](j, k) +
                               ds[j](i, k) * ds[i](j, k) + s(i, k) * dij(j, k);
          m += 0.5 * prod2 - dij(j, k) * s(i, k);
        }
      }
    }
    return m;
  };
}

double weight_supremum(const SdeModel& model, double radius, int samples_per_axis) {
  if (!(radius > 0.0)) throw std::invalid_argument("weight_supremum: radius must be positive");
  const int d = model.dim;
  if (samples_per_axis <= 0) samples_per_axis = d == 1 ? 10000 : 1000;
  const ScalarField m = monotonicity_weight(model);
  const int n = samples_per_axis;
  long long total = 1;
  for (int a = 0; a < d; ++a) total *= n;
  double best = -std::numeric_limits<double>::infinity();
  Point x(d);
  for (long long idx = 0; idx < total; ++idx) {
    long long rem = idx;
    for (int a = d - 1; a >= 0; --a) {
      const long long j = rem % n;
      rem /= n;
      x[a] = n == 1 ? 0.0 : -radius + 2.0 * radius * static_cast<double>(j) / (n - 1);
    }
    if (x.norm() > radius) continue;
    best = std::max(best, m(x));
  }
  return best;
}

QuadratureRule support_rule(const TestFunction& phi, int nodes, int panels) {
  if (!phi.compactly_supported()) {
    throw std::invalid_argument("support_rule: test function is not compactly supported");
  }
  // Common box for all axes: [min_a (c_a - s), max_a (c_a + s)].
  const double lo = phi.support_center.minCoeff() - phi.support_radius;
  const double hi = phi.support_center.maxCoeff() + phi.support_radius;
  return tensor_rule(composite_gauss_legendre(nodes, panels, lo, hi), phi.dim);
}

namespace {

void check_window(const TestFunction& phi, const QuadratureRule& rule) {
  if (!phi.compactly_supported()) {
    throw std::invalid_argument("monotonicity_form: phi must be compactly supported");
  }
  if (rule.kind != QuadratureKind::GaussLegendre) {
    throw std::invalid_argument("monotonicity_form: expects a Legendre rule over the support");
  }
  const double tol = 1e-12 * (1.0 + phi.support_radius);
  for (int a = 0; a < phi.dim; ++a) {
    if (phi.support_center[a] - phi.support_radius < rule.lower - tol ||
        phi.support_center[a] + phi.support_radius > rule.upper + tol) {
      throw std::invalid_argument("monotonicity_form: support of phi exceeds the quadrature window");
    }
  }
}

}  // namespace

double monotonicity_form(const TestFunction& phi, const SdeModel& model,
                         const QuadratureRule& rule) {
  check_window(phi, rule);
  const ScalarField lstar = adjoint_pointwise(OperatorTag::Generator, 0, model, phi);
  std::vector<ScalarField> astar;
  for (int i = 0; i < model.noise_dim; ++i) {
    astar.push_back(adjoint_pointwise(OperatorTag::Diffusion, i, model, phi));
  }
  return rule.integrate([&](const Point& x) {
    double v = 2.0 * lstar(x) * phi(x);
    for (const auto& a : astar) {
      const double ax = a(x);
      v += ax * ax;
    }
    return v;
  });
}

double monotonicity_form(const CoeffVector& phi, const SdeModel& model,
                         const QuadratureRule& galerkin_rule, int range_margin) {
  const int n = phi.trunc();
  const OperatorMatrix l = assemble_galerkin(OperatorTag::Generator, 0, model, n, galerkin_rule);
  double form = 2.0 * sobolev_inner(adjoint_apply(l, phi), phi, SobolevIndex(0.0));
  for (int i = 0; i < model.noise_dim; ++i) {
    // Domain = the image set |k| <= N + margin, range = phi's set, so the
    // transpose maps phi onto the wider set.
    const OperatorMatrix a =
        assemble_galerkin(OperatorTag::Diffusion, i, model, n + range_margin, galerkin_rule, n);
    const CoeffVector image = adjoint_apply(a, phi);
    form += sobolev_inner(image, image, SobolevIndex(0.0));
  }
  return form;
}

double weight_integral(const TestFunction& phi, const SdeModel& model, const QuadratureRule& rule) {
  check_window(phi, rule);
  const ScalarField m = monotonicity_weight(model);
  return rule.integrate([&](const Point& x) {
    const double v = phi(x);
    return v == 0.0 ? 0.0 : m(x) * v * v;
  });
}

double drift_identity_residual(const TestFunction& phi, const SdeModel& model,
                               const QuadratureRule& rule) {
  check_window(phi, rule);
  const SdeModel drift = drift_only(model);
  const ScalarField lstar = adjoint_pointwise(OperatorTag::Generator, 0, drift, phi);
  return rule.integrate([&](const Point& x) {
    const double v = phi(x);
    return 2.0 * lstar(x) * v + model.drift_jacobian(x).trace() * v * v;
  });
}

VerificationReport monotonicity_check(const SdeModel& model, const MonotonicityCheckOptions& opts) {
  if (opts.trials < 1) throw std::invalid_argument("monotonicity_check: trials must be >= 1");
  const auto start = std::chrono::steady_clock::now();
  VerificationReport report;
  report.identity = "monotonicity";
  report.scenario = model.name;
  report.seed = opts.seed;
  report.add_param("support_radius", opts.support_radius);
  report.add_param("trials", opts.trials);
  report.add_param("tolerance", opts.tolerance);
  report.add_param("ratio_tolerance", opts.ratio_tolerance);
  report.tolerance = opts.tolerance;

  const double ck = weight_supremum(model, opts.support_radius);
  const int d = model.dim;
  NormalStream rng(opts.seed, derive_stream(opts.seed, "monotonicity-bumps"));
  double min_ratio = std::numeric_limits<double>::infinity();
  double max_ratio = -std::numeric_limits<double>::infinity();
  double worst_defect = 0.0;
  bool bound_ok = true;
  for (int trial = 0; trial < opts.trials; ++trial) {
    // Width in [0.3 R, 0.7 R]; center so the ball stays inside B(0, R).
    const double width = opts.support_radius * (0.3 + 0.4 * rng.next_uniform());
    const double room = opts.support_radius - width;
    Point center(d);
    for (int a = 0; a < d; ++a) center[a] = (2.0 * rng.next_uniform() - 1.0) * room;
    if (center.norm() > room) center *= room / center.norm();
    const double amplitude = 0.5 + 1.5 * rng.next_uniform();
    const TestFunction phi = bump_function(amplitude, center, width);

    const QuadratureRule rule = support_rule(phi);
    const double norm2 = rule.integrate([&](const Point& x) {
      const double v = phi(x);
      return v * v;
    });
    const double form = monotonicity_form(phi, model, rule);
    const double weighted = weight_integral(phi, model, rule);
    const double ratio = form / norm2;
    min_ratio = std::min(min_ratio, ratio);
    max_ratio = std::max(max_ratio, ratio);
    const double defect = (form - weighted) / norm2;
    worst_defect = std::max(worst_defect, std::abs(defect));
    if (!(ratio <= ck + opts.ratio_tolerance)) bound_ok = false;
    report.series.push_back({static_cast<double>(trial), defect, 0.0, opts.tolerance});
  }
  report.add_diagnostic("C_K", ck);
  report.add_diagnostic("min_ratio", min_ratio);
  report.add_diagnostic("max_ratio", max_ratio);
  report.add_diagnostic("worst_identity_defect", worst_defect);
  if (!bound_ok) report.notes.push_back("form exceeded C_K ||phi||^2 for at least one bump");
  report.finalize(bound_ok);
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace hermflow
