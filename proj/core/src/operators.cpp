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

#include "hermflow/operators.hpp"

#include <stdexcept>
#include <string>
#include <vector>

#include "hermflow/common.hpp"
#include "hermflow/hermite.hpp"

namespace hermflow {

namespace {

void require_partials(const TestFunction& phi, bool need_hessian, const char* what) {
  if (!phi.has_gradient() || (need_hessian && !phi.has_hessian())) {
    throw std::invalid_argument(std::string(what) + ": test function '" + phi.name +
                                "' is missing required partial derivatives");
  }
}

void check_noise_index(const SdeModel& model, int i) {
  if (i < 0 || i >= model.noise_dim) throw std::invalid_argument("operator: invalid noise index");
}

}  // namespace

ScalarField apply_operator_pointwise(OperatorTag tag, int noise_index, const SdeModel& model,
                                     const TestFunction& phi) {
  if (phi.dim != model.dim) throw std::invalid_argument("apply_operator_pointwise: dimension mismatch");
  switch (tag) {
    case OperatorTag::Diffusion: {
      require_partials(phi, false, "apply_operator_pointwise(A)");
      check_noise_index(model, noise_index);
      return [model, grad = phi.gradient, i = noise_index](const Point& x) {
        return model.diffusion(x).col(i).dot(grad(x));
      };
    }
    case OperatorTag::Generator: {
      require_partials(phi, true, "apply_operator_pointwise(L)");
      return [model, grad = phi.gradient, hess = phi.hessian](const Point& x) {
        const SmallMatrix s = model.diffusion(x);
        const SmallMatrix a = s * s.transpose();
        return 0.5 * (a.cwiseProduct(hess(x))).sum() + model.drift(x).dot(grad(x));
      };
    }
    default:
      throw std::invalid_argument("apply_operator_pointwise: tag must be A or L");
  }
}

ScalarField adjoint_pointwise(OperatorTag tag, int noise_index, const SdeModel& model,
                              const TestFunction& phi) {
  if (phi.dim != model.dim) throw std::invalid_argument("adjoint_pointwise: dimension mismatch");
  const int d = model.dim;
  switch (tag) {
    case OperatorTag::Diffusion: {
      require_partials(phi, false, "adjoint_pointwise(A*)");
      check_noise_index(model, noise_index);
      return [model, f = phi.value, grad = phi.gradient, i = noise_index, d](const Point& x) {
        const SmallMatrix s = model.diffusion(x);
        const Point g = grad(x);
        const double v = f(x);
        double out = 0.0;
        for (int k = 0; k < d; ++k) {
          out -= model.diffusion_partial(x, k)(k, i) * v + s(k, i) * g[k];
        }
        return out;
      };
    }
    case OperatorTag::Generator: {
      require_partials(phi, true, "adjoint_pointwise(L*)");
      return [model, f = phi.value, grad = phi.gradient, hess = phi.hessian, d](const Point& x) {
        const SmallMatrix s = model.diffusion(x);
        const int r = static_cast<int>(s.cols());
        std::vector<SmallMatrix> ds;
        ds.reserve(static_cast<std::size_t>(d));
        for (int l = 0; l < d; ++l) ds.push_back(model.diffusion_partial(x, l));
        const double v = f(x);
        const Point g = grad(x);
        const SmallMatrix h = hess(x);
        // a = s s^T; da_ij/dx_l and d2 a_ij / dx_i dx_j via product rule.
        double second = 0.0;
        for (int i = 0; i < d; ++i) {
          for (int j = 0; j < d; ++j) {
            double a = 0.0, di_a = 0.0, dj_a = 0.0, dij_a = 0.0;
            const SmallMatrix dij_s = model.diffusion_second_partial(x, i, j);
            for (int k = 0; k < r; ++k) {
              a += s(i, k) * s(j, k);
              di_a += ds[i](i, k) * s(j, k) + s(i, k) * ds[i](j, k);
              dj_a += ds[j](i, k) * s(j, k) + s(i, k) * ds[j](j, k);
              dij_a += dij_s(i, k) * s(j, k) + ds[i](i, k) * ds[j](j, k) +
                       ds[j](i, k) * ds[i](j, k) + s(i, k) * dij_s(j, k);
            }
            second += dij_a * v + di_a * g[j] + dj_a * g[i] + a * h(i, j);
          }
        }
        const Point b = model.drift(x);
        const SmallMatrix db = model.drift_jacobian(x);
        double first = 0.0;
        for (int i = 0; i < d; ++i) first += db(i, i) * v + b[i] * g[i];
        return 0.5 * second - first;
      };
    }
    default:
      throw std::invalid_argument("adjoint_pointwise: tag must be A or L");
  }
}

OperatorMatrix assemble_galerkin(OperatorTag tag, int axis, const SdeModel& model, int trunc,
                                 const QuadratureRule& rule, int range_trunc) {
  if (range_trunc < 0) range_trunc = trunc;
  if (trunc < 0) throw std::invalid_argument("assemble_galerkin: negative truncation");
  const int d = rule.dim;
  if (model.dim != d) throw std::invalid_argument("assemble_galerkin: model/rule dimension mismatch");
  if (tag == OperatorTag::Diffusion) check_noise_index(model, axis);
  if ((tag == OperatorTag::Derivative || tag == OperatorTag::Position) && (axis < 0 || axis >= d)) {
    throw std::invalid_argument("assemble_galerkin: invalid axis");
  }
  const int needed = std::max(trunc, range_trunc) + 4;
  if (rule.order_per_axis < needed) {
    warn("assemble_galerkin: rule has " + std::to_string(rule.order_per_axis) +
         " nodes per axis; at least " + std::to_string(needed) + " needed to resolve the matrix");
  }

  const MultiIndexSet cols(d, trunc);
  const MultiIndexSet rows(d, range_trunc);
  const auto nq = static_cast<Eigen::Index>(rule.size());
  // test(q, k) = W_q h_k(x_q); image(q, l) = (Op h_l)(x_q)
  Eigen::MatrixXd test(nq, static_cast<Eigen::Index>(rows.size()));
  Eigen::MatrixXd image(nq, static_cast<Eigen::Index>(cols.size()));
  const int top = std::max(trunc, range_trunc);

  for (Eigen::Index q = 0; q < nq; ++q) {
    const Point x = rule.node(static_cast<std::size_t>(q));
    std::vector<HermiteJet> jet;
    jet.reserve(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a) jet.push_back(hermite_jet_1d(top, x[a]));
    const double w = rule.lebesgue_weights[static_cast<std::size_t>(q)];
    for (std::size_t pos = 0; pos < rows.size(); ++pos) {
      double v = w;
      for (int a = 0; a < d; ++a) v *= jet[a].value[static_cast<std::size_t>(rows[pos][a])];
      test(q, static_cast<Eigen::Index>(pos)) = v;
    }

    SmallMatrix s, a_mat;
    Point b;
    if (tag == OperatorTag::Diffusion || tag == OperatorTag::Generator) {
      s = model.diffusion(x);
      a_mat = s * s.transpose();
      b = model.drift(x);
    }
    // Partial of basis function l along axes (p, r); -1 means no derivative.
    auto partial = [&](const MultiIndex& l, int p, int r) {
      double v = 1.0;
      for (int ax = 0; ax < d; ++ax) {
        const int order = (ax == p) + (ax == r);
        const auto k = static_cast<std::size_t>(l[ax]);
        v *= order == 0 ? jet[ax].value[k] : order == 1 ? jet[ax].first[k] : jet[ax].second[k];
      }
      return v;
    };
    for (std::size_t pos = 0; pos < cols.size(); ++pos) {
      const MultiIndex& l = cols[pos];
      double v = 0.0;
      switch (tag) {
        case OperatorTag::Derivative:
          v = partial(l, axis, -1);
          break;
        case OperatorTag::Position:
          v = x[axis] * partial(l, -1, -1);
          break;
        case OperatorTag::Diffusion:
          for (int k = 0; k < d; ++k) v += s(k, axis) * partial(l, k, -1);
          break;
        case OperatorTag::Generator:
          for (int i = 0; i < d; ++i) {
            v += b[i] * partial(l, i, -1);
            for (int j = 0; j < d; ++j) v += 0.5 * a_mat(i, j) * partial(l, i, j);
          }
          break;
      }
      image(q, static_cast<Eigen::Index>(pos)) = v;
    }
  }

  OperatorMatrix m;
  m.tag = tag;
  m.axis = tag == OperatorTag::Generator ? 0 : axis;
  m.dim = d;
  m.domain_trunc = trunc;
  m.range_trunc = range_trunc;
  m.matrix = test.transpose() * image;
  return m;
}

CoeffVector adjoint_apply(const OperatorMatrix& m, const CoeffVector& psi) {
  if (psi.dim() != m.dim || psi.trunc() != m.range_trunc) {
    throw std::invalid_argument("adjoint_apply: psi must live on the operator's range set");
  }
  return CoeffVector(m.dim, m.domain_trunc, m.matrix.transpose() * psi.values());
}

}  // namespace hermflow
