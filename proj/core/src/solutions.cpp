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

#include "hermflow/solutions.hpp"

#include <array>
#include <cmath>
#include <map>

#include <Eigen/LU>
#include <stdexcept>

#include "hermflow/hermite.hpp"

namespace hermflow {

namespace {

using NodeKey = std::array<double, kMaxDim>;

NodeKey key_of(const Point& x) {
  NodeKey k{};
  for (int a = 0; a < x.size(); ++a) k[static_cast<std::size_t>(a)] = x[a];
  return k;
}

}  // namespace

FlowPairing::FlowPairing(const InitialCondition& psi, const FlowEnsemble& ensemble)
    : ensemble_(&ensemble) {
  if (psi.dim != ensemble.model.dim) throw std::invalid_argument("FlowPairing: dimension mismatch");
  std::map<NodeKey, std::size_t> index;
  for (std::size_t j = 0; j < ensemble.node_count(); ++j) index.emplace(key_of(ensemble.nodes[j]), j);
  auto find = [&](const Point& x) {
    const auto it = index.find(key_of(x));
    if (it == index.end()) {
      throw std::invalid_argument("FlowPairing: ensemble nodes do not cover the initial datum");
    }
    return it->second;
  };
  // Flatten combinations depth first.
  std::vector<std::pair<double, const InitialCondition*>> stack{{1.0, &psi}};
  while (!stack.empty()) {
    const auto [scale, ic] = stack.back();
    stack.pop_back();
    switch (ic->kind) {
      case InitialKind::Smooth:
        for (std::size_t q = 0; q < ic->rule.size(); ++q) {
          const Point x = ic->rule.node(q);
          const double v = ic->function(x);
          if (v == 0.0) continue;
          atoms_.push_back({find(x), scale * ic->rule.lebesgue_weights[q] * v, -1});
        }
        break;
      case InitialKind::Delta:
        atoms_.push_back({find(ic->point), scale, -1});
        break;
      case InitialKind::DerivativeDelta:
        for (int a = 0; a < ic->dim; ++a) {
          if (ic->gamma[a] != 0) atoms_.push_back({find(ic->point), -scale * ic->gamma[a], a});
        }
        has_derivative_ = true;
        break;
      case InitialKind::Combination:
        for (auto it = ic->terms.rbegin(); it != ic->terms.rend(); ++it) {
          stack.emplace_back(scale * it->first, &it->second);
        }
        break;
    }
  }
}

double FlowPairing::pair(int n, const ScalarField& g) const {
  if (has_derivative_) {
    throw std::invalid_argument("FlowPairing: derivative delta needs a test function with a gradient");
  }
  double sum = 0.0;
  for (const Atom& a : atoms_) sum += a.weight * g(ensemble_->position(n, a.node));
  return sum;
}

double FlowPairing::pair(int n, const TestFunction& g) const {
  double sum = 0.0;
  for (const Atom& a : atoms_) {
    const Point& x = ensemble_->position(n, a.node);
    if (a.axis < 0) {
      sum += a.weight * g(x);
    } else {
      if (!g.has_gradient()) {
        throw std::invalid_argument("FlowPairing: derivative delta needs a test function with a gradient");
      }
      // d_a (g o X) = sum_b d_b g(X) J(b, a)
      const Point grad = g.gradient(x);
      const SmallMatrix& jac = ensemble_->jacobian(n, a.node);
      sum += a.weight * grad.dot(jac.col(a.axis));
    }
  }
  return sum;
}

void FlowPairing::atoms(int n, std::vector<Point>& points, std::vector<double>& weights) const {
  if (has_derivative_) {
    throw std::invalid_argument("FlowPairing::atoms: not available for derivative deltas");
  }
  points.clear();
  weights.clear();
  for (const Atom& a : atoms_) {
    points.push_back(ensemble_->position(n, a.node));
    weights.push_back(a.weight);
  }
}

CoeffVector FlowPairing::coeffs(int n, int trunc) const {
  const int d = ensemble_->model.dim;
  const MultiIndexSet set(d, trunc);
  Eigen::VectorXd values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(set.size()));
  for (const Atom& a : atoms_) {
    const Point& x = ensemble_->position(n, a.node);
    if (a.axis < 0) {
      values += a.weight * basis_values(set, x);
    } else {
      const Eigen::MatrixXd grads = basis_gradients(set, x);
      const SmallMatrix& jac = ensemble_->jacobian(n, a.node);
      values += a.weight * (grads * jac.col(a.axis));
    }
  }
  return CoeffVector(d, trunc, std::move(values));
}

CoeffVector FlowPairing::martingale_increment(int n, int trunc) const {
  if (has_derivative_) {
    throw std::invalid_argument("FlowPairing::martingale_increment: not available for derivative deltas");
  }
  const SdeModel& model = ensemble_->model;
  const MultiIndexSet set(model.dim, trunc);
  Eigen::VectorXd values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(set.size()));
  Eigen::VectorXd db(model.noise_dim);
  for (int i = 0; i < model.noise_dim; ++i) db[i] = ensemble_->path.increment(n, i);
  for (const Atom& a : atoms_) {
    const Point& x = ensemble_->position(n, a.node);
    const Eigen::VectorXd direction = model.diffusion(x) * db;
    values += a.weight * (basis_gradients(set, x) * direction);
  }
  return CoeffVector(model.dim, trunc, std::move(values));
}

DistributionPath z_coeffs(const InitialCondition& psi, const FlowEnsemble& ensemble, int trunc) {
  const FlowPairing pairing(psi, ensemble);
  DistributionPath out;
  out.ensemble_id = ensemble.id;
  out.source = to_string(psi.kind);
  for (int n = 0; n <= ensemble.steps(); ++n) {
    out.times.push_back(ensemble.time(n));
    out.coeffs.push_back(pairing.coeffs(n, trunc));
  }
  return out;
}

std::vector<double> z_density_1d(const InitialCondition& psi, const FlowEnsemble& ensemble, int n,
                                 const std::vector<double>& ys) {
  if (psi.kind != InitialKind::Smooth || psi.dim != 1) {
    throw std::invalid_argument("z_density_1d: needs a smooth datum in d = 1");
  }
  const double lo = psi.function.support_center[0] - psi.function.support_radius;
  const double hi = psi.function.support_center[0] + psi.function.support_radius;
  const double image_lo = ensemble.trace(point1(lo), n)[0];
  const double image_hi = ensemble.trace(point1(hi), n)[0];
  std::vector<double> out;
  out.reserve(ys.size());
  for (double y : ys) {
    if (y <= image_lo || y >= image_hi) {
      out.push_back(0.0);
      continue;
    }
    const double x = inverse_flow_1d(ensemble, n, y);
    SmallMatrix jac;
    ensemble.trace(point1(x), n, jac);
    out.push_back(psi.function(point1(x)) / std::abs(jac(0, 0)));
  }
  return out;
}

double z_l2_norm_squared(const InitialCondition& psi, const FlowEnsemble& ensemble, int n) {
  if (psi.kind != InitialKind::Smooth) {
    throw std::invalid_argument("z_l2_norm_squared: needs a smooth datum");
  }
  double sum = 0.0;
  for (std::size_t q = 0; q < psi.rule.size(); ++q) {
    const Point x = psi.rule.node(q);
    const double v = psi.function(x);
    if (v == 0.0) continue;
    SmallMatrix jac;
    ensemble.trace(x, n, jac);
    sum += psi.rule.lebesgue_weights[q] * v * v / std::abs(jac.determinant());
  }
  return sum;
}

}  // namespace hermflow
