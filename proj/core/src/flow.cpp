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

#include "hermflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "hermflow/parallel.hpp"
#include "hermflow/rng.hpp"

namespace hermflow {

namespace {

int aligned_steps(double t, double dt, const char* what) {
  if (!(dt > 0.0)) throw std::invalid_argument(std::string(what) + ": dt must be positive");
  if (!(t >= 0.0)) throw std::invalid_argument(std::string(what) + ": negative time");
  const double ratio = t / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-8 * std::max(1.0, ratio)) {
    throw std::invalid_argument(std::string(what) + ": time is not a multiple of dt");
  }
  return static_cast<int>(rounded);
}

// e^{-lambda h} and (1 - e^{-lambda h}) / lambda without cancellation at small lambda.
double ou_decay(double lambda, double h) { return std::exp(-lambda * h); }
double ou_mean_factor(double lambda, double h) {
  return lambda == 0.0 ? h : -std::expm1(-lambda * h) / lambda;
}
double ou_variance(double lambda, double h) {
  return lambda == 0.0 ? h : -std::expm1(-2.0 * lambda * h) / (2.0 * lambda);
}

}  // namespace

int step_count(double horizon, double dt) {
  const int n = aligned_steps(horizon, dt, "step_count");
  if (n < 1) throw std::invalid_argument("step_count: horizon must be at least dt");
  return n;
}

BrownianPath BrownianPath::generate(int noise_dim, double dt, int steps, std::uint64_t seed,
                                    std::uint64_t stream) {
  check_dimension(noise_dim, "BrownianPath");
  if (!(dt > 0.0)) throw std::invalid_argument("BrownianPath: dt must be positive");
  if (steps < 0) throw std::invalid_argument("BrownianPath: negative step count");
  BrownianPath p;
  p.noise_dim = noise_dim;
  p.dt = dt;
  p.steps = steps;
  p.seed = seed;
  p.stream = stream;
  const NormalStream rng(seed, stream);
  const double scale = std::sqrt(dt);
  const std::size_t total = static_cast<std::size_t>(steps) * static_cast<std::size_t>(noise_dim);
  p.increments.resize(total);
  for (std::size_t k = 0; k < total; ++k) p.increments[k] = scale * rng.normal(k);
  return p;
}

Point BrownianPath::value(int n) const {
  Point b = Point::Zero(noise_dim);
  for (int m = 0; m < n; ++m) {
    for (int i = 0; i < noise_dim; ++i) b[i] += increment(m, i);
  }
  return b;
}

BrownianPath BrownianPath::coarsen(int factor) const {
  if (factor < 1 || steps % factor != 0) {
    throw std::invalid_argument("BrownianPath::coarsen: factor must divide the step count");
  }
  BrownianPath c = *this;
  c.dt = dt * factor;
  c.steps = steps / factor;
  c.increments.assign(static_cast<std::size_t>(c.steps) * static_cast<std::size_t>(noise_dim), 0.0);
  for (int n = 0; n < c.steps; ++n) {
    for (int i = 0; i < noise_dim; ++i) {
      double sum = 0.0;
      for (int m = 0; m < factor; ++m) sum += increment(n * factor + m, i);
      c.increments[static_cast<std::size_t>(n * noise_dim + i)] = sum;
    }
  }
  return c;
}

BrownianPath BrownianPath::shifted(int offset) const {
  if (offset < 0 || offset > steps) throw std::invalid_argument("BrownianPath::shifted: bad offset");
  BrownianPath s = *this;
  s.steps = steps - offset;
  s.increments.assign(increments.begin() + static_cast<std::ptrdiff_t>(offset) * noise_dim,
                      increments.end());
  return s;
}

OuExactNoise OuExactNoise::generate(double lambda, int noise_dim, double dt, int steps,
                                    std::uint64_t seed, std::uint64_t stream) {
  check_dimension(noise_dim, "OuExactNoise");
  if (!(dt > 0.0)) throw std::invalid_argument("OuExactNoise: dt must be positive");
  OuExactNoise noise;
  noise.lambda = lambda;
  noise.path.noise_dim = noise_dim;
  noise.path.dt = dt;
  noise.path.steps = steps;
  noise.path.seed = seed;
  noise.path.stream = stream;
  const std::size_t total = static_cast<std::size_t>(steps) * static_cast<std::size_t>(noise_dim);
  noise.path.increments.resize(total);
  noise.integrals.resize(total);
  const double cov = ou_mean_factor(lambda, dt);
  const double var_i = ou_variance(lambda, dt);
  const double slope = cov / dt;
  const double resid = std::sqrt(std::max(0.0, var_i - cov * cov / dt));
  const double scale = std::sqrt(dt);
  const NormalStream rng(seed, stream);
  for (std::size_t k = 0; k < total; ++k) {
    const double db = scale * rng.normal(2 * k);
    noise.path.increments[k] = db;
    noise.integrals[k] = slope * db + resid * rng.normal(2 * k + 1);
  }
  return noise;
}

OuExactNoise OuExactNoise::coarsen(int factor) const {
  OuExactNoise c;
  c.lambda = lambda;
  c.path = path.coarsen(factor);
  const int r = path.noise_dim;
  const double decay = ou_decay(lambda, path.dt);
  c.integrals.assign(c.path.increments.size(), 0.0);
  for (int n = 0; n < c.path.steps; ++n) {
    for (int i = 0; i < r; ++i) {
      double acc = 0.0;
      for (int m = 0; m < factor; ++m) acc = decay * acc + integral(n * factor + m, i);
      c.integrals[static_cast<std::size_t>(n * r + i)] = acc;
    }
  }
  return c;
}

void euler_step(const SdeModel& model, const double* dB, double dt, Point& x,
                SmallMatrix* jacobian) {
  const int d = model.dim;
  const int r = model.noise_dim;
  const SmallMatrix s = model.diffusion(x);
  const Point b = model.drift(x);
  if (jacobian != nullptr) {
    SmallMatrix g = model.drift_jacobian(x) * dt;
    if (!model.additive_noise) {
      for (int l = 0; l < d; ++l) {
        const SmallMatrix p = model.diffusion_partial(x, l);
        for (int i = 0; i < d; ++i) {
          for (int k = 0; k < r; ++k) g(i, l) += p(i, k) * dB[k];
        }
      }
    }
    const SmallMatrix updated = *jacobian + g * *jacobian;
    *jacobian = updated;
  }
  Point noise = Point::Zero(d);
  for (int i = 0; i < d; ++i) {
    for (int k = 0; k < r; ++k) noise[i] += s(i, k) * dB[k];
  }
  x = x + noise + b * dt;
}

namespace {

struct OuStep {
  double decay;
  double scale;
};

OuStep ou_step_constants(const SdeModel& model, double dt) {
  return {ou_decay(model.parameter("lambda"), dt), model.parameter("sigma")};
}

void ou_exact_step(const OuStep& c, const double* integrals, Point& x, SmallMatrix* jacobian) {
  for (int i = 0; i < x.size(); ++i) x[i] = c.decay * x[i] + c.scale * integrals[i];
  if (jacobian != nullptr) *jacobian *= c.decay;
}

}  // namespace

Point FlowEnsemble::trace(const Point& x, int n) const {
  SmallMatrix unused;
  return trace(x, n, unused);
}

Point FlowEnsemble::trace(const Point& x0, int n, SmallMatrix& jac) const {
  if (n < 0 || n > steps()) throw std::out_of_range("FlowEnsemble::trace: step out of range");
  if (x0.size() != model.dim) throw std::invalid_argument("FlowEnsemble::trace: dimension mismatch");
  Point x = x0;
  jac = SmallMatrix::Identity(model.dim, model.dim);
  const std::size_t r = static_cast<std::size_t>(path.noise_dim);
  if (exact_ou) {
    const OuStep c = ou_step_constants(model, dt());
    for (int m = 0; m < n; ++m) ou_exact_step(c, &ou_integrals[static_cast<std::size_t>(m) * r], x, &jac);
  } else {
    for (int m = 0; m < n; ++m) {
      euler_step(model, &path.increments[static_cast<std::size_t>(m) * r], dt(), x, &jac);
    }
  }
  return x;
}

FlowEnsemble simulate_flow(const SdeModel& model, const std::vector<Point>& nodes,
                           const BrownianPath& path, std::uint64_t id) {
  if (nodes.empty()) throw std::invalid_argument("simulate_flow: no nodes");
  if (path.noise_dim != model.noise_dim) {
    throw std::invalid_argument("simulate_flow: path and model noise dimensions differ");
  }
  for (const Point& x : nodes) {
    if (x.size() != model.dim) throw std::invalid_argument("simulate_flow: node dimension mismatch");
  }
  FlowEnsemble e;
  e.model = model;
  e.path = path;
  e.nodes = nodes;
  e.id = id;
  const std::size_t count = nodes.size();
  const std::size_t rows = static_cast<std::size_t>(path.steps) + 1;
  e.positions.resize(rows * count);
  e.jacobians.resize(rows * count);
  const std::size_t r = static_cast<std::size_t>(path.noise_dim);
  auto run_node = [&](std::size_t j) {
    Point x = nodes[j];
    SmallMatrix jac = SmallMatrix::Identity(model.dim, model.dim);
    e.positions[j] = x;
    e.jacobians[j] = jac;
    for (int n = 0; n < path.steps; ++n) {
      euler_step(model, &path.increments[static_cast<std::size_t>(n) * r], path.dt, x, &jac);
      if (model.dim == 1 && !(jac(0, 0) > 0.0)) {
        std::ostringstream msg;
        msg << "simulate_flow: Jacobian changed sign at step " << n + 1 << " for node " << j
            << " (dt = " << path.dt << " is too coarse)";
        throw std::runtime_error(msg.str());
      }
      const std::size_t slot = (static_cast<std::size_t>(n) + 1) * count + j;
      e.positions[slot] = x;
      e.jacobians[slot] = jac;
    }
  };
  if (count >= 32) {
    parallel_for(count, run_node);
  } else {
    for (std::size_t j = 0; j < count; ++j) run_node(j);
  }
  return e;
}

FlowEnsemble simulate_flow(const SdeModel& model, const std::vector<Point>& nodes, double horizon,
                           double dt, std::uint64_t seed, std::uint64_t id) {
  const int steps = step_count(horizon, dt);
  const BrownianPath path =
      BrownianPath::generate(model.noise_dim, dt, steps, seed, derive_stream(seed, "flow", id));
  return simulate_flow(model, nodes, path, id);
}

FlowEnsemble simulate_ou_exact(const SdeModel& model, const std::vector<Point>& nodes,
                               const OuExactNoise& noise, std::uint64_t id) {
  if (model.family != ModelFamily::OrnsteinUhlenbeck) {
    throw std::invalid_argument("simulate_ou_exact: model is not Ornstein-Uhlenbeck");
  }
  if (std::abs(model.parameter("lambda") - noise.lambda) > 1e-14 * (1.0 + std::abs(noise.lambda))) {
    throw std::invalid_argument("simulate_ou_exact: noise was generated for a different lambda");
  }
  if (noise.path.noise_dim != model.noise_dim) {
    throw std::invalid_argument("simulate_ou_exact: noise dimension mismatch");
  }
  if (nodes.empty()) throw std::invalid_argument("simulate_ou_exact: no nodes");
  FlowEnsemble e;
  e.model = model;
  e.path = noise.path;
  e.nodes = nodes;
  e.id = id;
  e.exact_ou = true;
  e.ou_integrals = noise.integrals;
  const std::size_t count = nodes.size();
  const std::size_t rows = static_cast<std::size_t>(noise.path.steps) + 1;
  const std::size_t r = static_cast<std::size_t>(noise.path.noise_dim);
  e.positions.resize(rows * count);
  e.jacobians.resize(rows * count);
  const OuStep c = ou_step_constants(model, noise.path.dt);
  for (std::size_t j = 0; j < count; ++j) {
    Point x = nodes[j];
    SmallMatrix jac = SmallMatrix::Identity(model.dim, model.dim);
    e.positions[j] = x;
    e.jacobians[j] = jac;
    for (int n = 0; n < noise.path.steps; ++n) {
      ou_exact_step(c, &noise.integrals[static_cast<std::size_t>(n) * r], x, &jac);
      e.positions[(static_cast<std::size_t>(n) + 1) * count + j] = x;
      e.jacobians[(static_cast<std::size_t>(n) + 1) * count + j] = jac;
    }
  }
  return e;
}

double flow_composition_residual(const SdeModel& model, const Point& x, double t, double s,
                                 double dt, std::uint64_t seed) {
  const int nt = aligned_steps(t, dt, "flow_composition_residual");
  const int ns = aligned_steps(s, dt, "flow_composition_residual");
  const BrownianPath path = BrownianPath::generate(model.noise_dim, dt, nt + ns, seed,
                                                   derive_stream(seed, "composition"));
  const std::size_t r = static_cast<std::size_t>(model.noise_dim);
  Point direct = x;
  for (int n = 0; n < nt + ns; ++n) {
    euler_step(model, &path.increments[static_cast<std::size_t>(n) * r], dt, direct, nullptr);
  }
  Point restart = x;
  for (int n = 0; n < nt; ++n) {
    euler_step(model, &path.increments[static_cast<std::size_t>(n) * r], dt, restart, nullptr);
  }
  const BrownianPath tail = path.shifted(nt);
  for (int n = 0; n < ns; ++n) {
    euler_step(model, &tail.increments[static_cast<std::size_t>(n) * r], dt, restart, nullptr);
  }
  return (direct - restart).norm();
}

double inverse_flow_1d(const FlowEnsemble& ensemble, int n, double y) {
  if (ensemble.model.dim != 1) throw std::invalid_argument("inverse_flow_1d: requires d = 1");
  if (n < 0 || n > ensemble.steps()) throw std::out_of_range("inverse_flow_1d: step out of range");
  std::vector<std::size_t> order(ensemble.node_count());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return ensemble.nodes[a][0] < ensemble.nodes[b][0];
  });
  // Drop duplicate nodes so strict monotonicity is meaningful.
  order.erase(std::unique(order.begin(), order.end(),
                          [&](std::size_t a, std::size_t b) {
                            return ensemble.nodes[a][0] == ensemble.nodes[b][0];
                          }),
              order.end());
  std::vector<double> xs;
  std::vector<double> images;
  for (std::size_t j : order) {
    xs.push_back(ensemble.nodes[j][0]);
    images.push_back(ensemble.position(n, j)[0]);
  }
  for (std::size_t i = 1; i < images.size(); ++i) {
    if (!(images[i] > images[i - 1])) {
      throw std::runtime_error("inverse_flow_1d: flow image is not increasing (corrupt ensemble)");
    }
  }
  if (y < images.front() || y > images.back()) {
    throw std::out_of_range("inverse_flow_1d: y is outside the image of the node hull");
  }
  const auto it = std::lower_bound(images.begin(), images.end(), y);
  const std::size_t hi_idx = static_cast<std::size_t>(it - images.begin());
  if (*it == y) return xs[hi_idx];
  const std::size_t lo_idx = hi_idx - 1;
  double lo = xs[lo_idx];
  double hi = xs[hi_idx];
  double x = lo + (y - images[lo_idx]) * (hi - lo) / (images[hi_idx] - images[lo_idx]);
  const double tol = 1e-13 * (1.0 + std::abs(y));
  for (int iter = 0; iter < 200; ++iter) {
    SmallMatrix jac;
    const double f = ensemble.trace(point1(x), n, jac)[0] - y;
    if (std::abs(f) <= tol) return x;
    if (f < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    double next = x - f / jac(0, 0);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo <= 4e-16 * (1.0 + std::abs(x))) return next;
    x = next;
  }
  return x;
}

double hitting_time(const FlowEnsemble& ensemble, double support, double radius) {
  std::vector<std::size_t> inside;
  for (std::size_t j = 0; j < ensemble.node_count(); ++j) {
    if (ensemble.nodes[j].norm() <= support * (1.0 + 1e-12)) inside.push_back(j);
  }
  if (inside.empty()) throw std::invalid_argument("hitting_time: no nodes inside the support ball");
  for (int n = 0; n <= ensemble.steps(); ++n) {
    for (std::size_t j : inside) {
      if (ensemble.position(n, j).norm() >= radius) return ensemble.time(n);
    }
  }
  return kNeverHit;
}

void write_ensemble_csv(std::ostream& out, const FlowEnsemble& e) {
  const int d = e.model.dim;
  out << "n,t,j";
  if (d == 1) {
    out << ",x_j,X,J\n";
  } else {
    for (int a = 0; a < d; ++a) out << ",x_j" << a;
    for (int a = 0; a < d; ++a) out << ",X" << a;
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) out << ",J" << a << b;
    }
    out << '\n';
  }
  out.precision(17);
  for (int n = 0; n <= e.steps(); ++n) {
    for (std::size_t j = 0; j < e.node_count(); ++j) {
      out << n << ',' << e.time(n) << ',' << j;
      for (int a = 0; a < d; ++a) out << ',' << e.nodes[j][a];
      const Point& x = e.position(n, j);
      for (int a = 0; a < d; ++a) out << ',' << x[a];
      const SmallMatrix& jac = e.jacobian(n, j);
      for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) out << ',' << jac(a, b);
      }
      out << '\n';
    }
  }
}

void write_increments_csv(std::ostream& out, const BrownianPath& path) {
  out << 'n';
  for (int i = 0; i < path.noise_dim; ++i) out << ",dB_" << i;
  out << '\n';
  out.precision(17);
  for (int n = 0; n < path.steps; ++n) {
    out << n;
    for (int i = 0; i < path.noise_dim; ++i) out << ',' << path.increment(n, i);
    out << '\n';
  }
}

BrownianPath read_increments_csv(std::istream& in, double dt) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_increments_csv: empty input");
  const int r = static_cast<int>(std::count(line.begin(), line.end(), ','));
  check_dimension(r, "read_increments_csv");
  BrownianPath path;
  path.noise_dim = r;
  path.dt = dt;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::getline(row, cell, ',');
    if (std::stoi(cell) != path.steps) throw std::runtime_error("read_increments_csv: rows out of order");
    for (int i = 0; i < r; ++i) {
      if (!std::getline(row, cell, ',')) throw std::runtime_error("read_increments_csv: short row");
      path.increments.push_back(std::stod(cell));
    }
    ++path.steps;
  }
  return path;
}

}  // namespace hermflow
