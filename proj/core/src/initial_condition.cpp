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

#include "hermflow/initial_condition.hpp"

#include <algorithm>
#include <stdexcept>

namespace hermflow {

std::string to_string(InitialKind kind) {
  switch (kind) {
    case InitialKind::Smooth:
      return "smooth";
    case InitialKind::Delta:
      return "delta";
    case InitialKind::DerivativeDelta:
      return "derivative-delta";
    case InitialKind::Combination:
      return "combination";
  }
  return "unknown";
}

double InitialCondition::support_radius() const {
  switch (kind) {
    case InitialKind::Smooth:
      return function.support_center.norm() + function.support_radius;
    case InitialKind::Delta:
    case InitialKind::DerivativeDelta:
      return point.norm();
    case InitialKind::Combination: {
      double r = 0.0;
      for (const auto& [c, term] : terms) r = std::max(r, term.support_radius());
      return r;
    }
  }
  return 0.0;
}

std::vector<Point> InitialCondition::ensemble_nodes() const {
  std::vector<Point> nodes;
  switch (kind) {
    case InitialKind::Smooth:
      for (std::size_t i = 0; i < rule.size(); ++i) nodes.push_back(rule.node(i));
      if (dim == 1) {
        nodes.push_back(point1(function.support_center[0] - function.support_radius));
        nodes.push_back(point1(function.support_center[0] + function.support_radius));
      }
      break;
    case InitialKind::Delta:
    case InitialKind::DerivativeDelta:
      nodes.push_back(point);
      break;
    case InitialKind::Combination:
      for (const auto& [c, term] : terms) {
        const auto sub = term.ensemble_nodes();
        nodes.insert(nodes.end(), sub.begin(), sub.end());
      }
      break;
  }
  return nodes;
}

double InitialCondition::pair(const TestFunction& f) const {
  switch (kind) {
    case InitialKind::Smooth:
      return rule.integrate([&](const Point& x) {
        const double v = function(x);
        return v == 0.0 ? 0.0 : v * f(x);
      });
    case InitialKind::Delta:
      return f(point);
    case InitialKind::DerivativeDelta: {
      if (!f.has_gradient()) {
        throw std::invalid_argument("InitialCondition::pair: derivative delta needs a gradient");
      }
      const Point g = f.gradient(point);
      double v = 0.0;
      for (int a = 0; a < dim; ++a) v -= gamma[a] * g[a];
      return v;
    }
    case InitialKind::Combination: {
      double v = 0.0;
      for (const auto& [c, term] : terms) v += c * term.pair(f);
      return v;
    }
  }
  return 0.0;
}

InitialCondition smooth_initial(const TestFunction& psi, int nodes, int panels) {
  if (!psi.compactly_supported()) {
    throw std::invalid_argument("smooth_initial: psi must be compactly supported");
  }
  check_dimension(psi.dim, "smooth_initial");
  if (panels <= 0) panels = psi.dim == 1 ? 8 : 4;
  InitialCondition ic;
  ic.kind = InitialKind::Smooth;
  ic.dim = psi.dim;
  ic.function = psi;
  const double lo = psi.support_center.minCoeff() - psi.support_radius;
  const double hi = psi.support_center.maxCoeff() + psi.support_radius;
  ic.rule = tensor_rule(composite_gauss_legendre(nodes, panels, lo, hi), psi.dim);
  return ic;
}

InitialCondition bump_initial(double amplitude, const Point& center, double width) {
  return smooth_initial(bump_function(amplitude, center, width));
}

InitialCondition bump_initial(double amplitude, double center, double width) {
  return smooth_initial(bump_function(amplitude, center, width));
}

InitialCondition delta_initial(const Point& x) {
  check_dimension(static_cast<int>(x.size()), "delta_initial");
  InitialCondition ic;
  ic.kind = InitialKind::Delta;
  ic.dim = static_cast<int>(x.size());
  ic.point = x;
  ic.gamma = MultiIndex(ic.dim);
  return ic;
}

InitialCondition derivative_delta_initial(const Point& x, const MultiIndex& gamma) {
  if (gamma.dim() != x.size()) {
    throw std::invalid_argument("derivative_delta_initial: dimension mismatch");
  }
  if (gamma.order() == 0) return delta_initial(x);
  if (gamma.order() != 1) {
    throw std::invalid_argument(
        "derivative_delta_initial: only |gamma| = 1 is supported (higher orders need d^2 X)");
  }
  InitialCondition ic = delta_initial(x);
  ic.kind = InitialKind::DerivativeDelta;
  ic.gamma = gamma;
  return ic;
}

InitialCondition combine(double alpha, const InitialCondition& psi1, double beta,
                         const InitialCondition& psi2) {
  if (psi1.dim != psi2.dim) throw std::invalid_argument("combine: dimension mismatch");
  InitialCondition ic;
  ic.kind = InitialKind::Combination;
  ic.dim = psi1.dim;
  ic.terms = {{alpha, psi1}, {beta, psi2}};
  return ic;
}

}  // namespace hermflow
