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

#include "hermflow/hermite.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hermflow {

namespace {

const double kPiQuarter = std::pow(std::numbers::pi, -0.25);

void fill_recurrence(double x, std::vector<double>& h) {
  const int top = static_cast<int>(h.size()) - 1;
  h[0] = kPiQuarter * std::exp(-0.5 * x * x);
  if (top >= 1) h[1] = std::sqrt(2.0) * x * h[0];
  for (int k = 1; k < top; ++k) {
    const double kk = static_cast<double>(k);
    h[k + 1] = x * std::sqrt(2.0 / (kk + 1.0)) * h[k] -
               std::sqrt(kk / (kk + 1.0)) * h[k - 1];
  }
}

// One application of the differentiation ladder; `in` has one more valid
// entry than `out`.
void ladder_derivative(const std::vector<double>& in, std::vector<double>& out) {
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double kk = static_cast<double>(k);
    const double down = k > 0 ? std::sqrt(kk / 2.0) * in[k - 1] : 0.0;
    out[k] = down - std::sqrt((kk + 1.0) / 2.0) * in[k + 1];
  }
}

}  // namespace

std::vector<double> hermite_eval_1d(int max_degree, double x) {
  if (max_degree < 0) throw std::invalid_argument("hermite_eval_1d: N < 0");
  std::vector<double> h(static_cast<std::size_t>(max_degree) + 1);
  fill_recurrence(x, h);
  return h;
}

std::vector<double> hermite_derivative_1d(int max_degree, int derivative_order,
                                          double x) {
  if (max_degree < 0 || derivative_order < 0) {
    throw std::invalid_argument("hermite_derivative_1d: negative order");
  }
  std::vector<double> cur =
      hermite_eval_1d(max_degree + derivative_order, x);
  for (int m = 1; m <= derivative_order; ++m) {
    std::vector<double> next(cur.size() - 1);
    ladder_derivative(cur, next);
    cur = std::move(next);
  }
  return cur;
}

HermiteJet hermite_jet_1d(int max_degree, double x) {
  if (max_degree < 0) throw std::invalid_argument("hermite_jet_1d: N < 0");
  HermiteJet jet;
  std::vector<double> ext(static_cast<std::size_t>(max_degree) + 2);
  fill_recurrence(x, ext);
  jet.first.resize(static_cast<std::size_t>(max_degree) + 1);
  ladder_derivative(ext, jet.first);
  ext.pop_back();
  jet.value = std::move(ext);
  jet.second.resize(jet.value.size());
  for (std::size_t k = 0; k < jet.value.size(); ++k) {
    // h_k'' = (x^2 - (2k+1)) h_k
    jet.second[k] = (x * x - (2.0 * static_cast<double>(k) + 1.0)) * jet.value[k];
  }
  return jet;
}

double hermite_eval_multi(const MultiIndex& k, const Point& x) {
  if (k.dim() != x.size()) {
    throw std::invalid_argument("hermite_eval_multi: dimension mismatch");
  }
  double result = 1.0;
  for (int i = 0; i < k.dim(); ++i) {
    result *= hermite_eval_1d(k[i], x[i]).back();
  }
  return result;
}

Eigen::VectorXd basis_values(const MultiIndexSet& set, const Point& x) {
  if (set.dim() != x.size()) {
    throw std::invalid_argument("basis_values: dimension mismatch");
  }
  const int d = set.dim();
  std::vector<std::vector<double>> axis(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) axis[a] = hermite_eval_1d(set.trunc(), x[a]);
  Eigen::VectorXd out(static_cast<Eigen::Index>(set.size()));
  for (std::size_t pos = 0; pos < set.size(); ++pos) {
    double v = 1.0;
    for (int a = 0; a < d; ++a) v *= axis[a][static_cast<std::size_t>(set[pos][a])];
    out[static_cast<Eigen::Index>(pos)] = v;
  }
  return out;
}

Eigen::MatrixXd basis_gradients(const MultiIndexSet& set, const Point& x) {
  if (set.dim() != x.size()) {
    throw std::invalid_argument("basis_gradients: dimension mismatch");
  }
  const int d = set.dim();
  std::vector<HermiteJet> axis;
  axis.reserve(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) axis.push_back(hermite_jet_1d(set.trunc(), x[a]));
  Eigen::MatrixXd out(static_cast<Eigen::Index>(set.size()), d);
  for (std::size_t pos = 0; pos < set.size(); ++pos) {
    for (int g = 0; g < d; ++g) {
      double v = 1.0;
      for (int a = 0; a < d; ++a) {
        const auto k = static_cast<std::size_t>(set[pos][a]);
        v *= (a == g) ? axis[a].first[k] : axis[a].value[k];
      }
      out(static_cast<Eigen::Index>(pos), g) = v;
    }
  }
  return out;
}

}  // namespace hermflow
