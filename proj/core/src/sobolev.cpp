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

#include "hermflow/sobolev.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "hermflow/common.hpp"
#include "hermflow/hermite.hpp"

namespace hermflow {

CoeffVector::CoeffVector(int dim, int trunc)
    : CoeffVector(dim, trunc,
                  Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis_size(dim, trunc)))) {}

CoeffVector::CoeffVector(int dim, int trunc, Eigen::VectorXd values)
    : dim_(dim), trunc_(trunc), values_(std::move(values)) {
  check_dimension(dim, "CoeffVector");
  if (trunc < 0) throw std::invalid_argument("CoeffVector: negative truncation");
  if (static_cast<std::size_t>(values_.size()) != basis_size(dim, trunc)) {
    throw std::invalid_argument("CoeffVector: length must equal C(N+d, d)");
  }
  if (!values_.allFinite()) throw std::invalid_argument("CoeffVector: non-finite entry");
}

CoeffVector CoeffVector::unit(int dim, int trunc, const MultiIndex& k) {
  CoeffVector v(dim, trunc);
  v[MultiIndexSet(dim, trunc).position(k)] = 1.0;
  return v;
}

double CoeffVector::coefficient(const MultiIndex& k) const {
  if (k.dim() != dim_) throw std::invalid_argument("CoeffVector: dimension mismatch");
  if (k.order() > trunc_) return 0.0;
  return (*this)[MultiIndexSet(dim_, trunc_).position(k)];
}

CoeffVector CoeffVector::retruncated(int trunc) const {
  CoeffVector out(dim_, trunc);
  // Graded-lex order is nested: the first C(n+d,d) entries are |k| <= n.
  const auto keep = static_cast<Eigen::Index>(std::min(size(), out.size()));
  out.values_.head(keep) = values_.head(keep);
  return out;
}

double CoeffVector::evaluate(const Point& x) const {
  return basis_values(MultiIndexSet(dim_, trunc_), x).dot(values_);
}

CoeffVector& CoeffVector::operator+=(const CoeffVector& other) {
  if (!same_shape(other)) throw std::invalid_argument("CoeffVector: shape mismatch");
  values_ += other.values_;
  return *this;
}

CoeffVector& CoeffVector::operator-=(const CoeffVector& other) {
  if (!same_shape(other)) throw std::invalid_argument("CoeffVector: shape mismatch");
  values_ -= other.values_;
  return *this;
}

CoeffVector& CoeffVector::operator*=(double s) {
  values_ *= s;
  return *this;
}

CoeffVector operator+(CoeffVector a, const CoeffVector& b) { return a += b; }
CoeffVector operator-(CoeffVector a, const CoeffVector& b) { return a -= b; }
CoeffVector operator*(double s, CoeffVector a) { return a *= s; }

SobolevIndex::SobolevIndex(double value) : p(value) {
  if (!std::isfinite(value)) throw std::invalid_argument("SobolevIndex: p must be finite");
}

double sobolev_inner(const CoeffVector& f, const CoeffVector& g, SobolevIndex p) {
  if (!f.same_shape(g)) throw std::invalid_argument("sobolev_inner: shape mismatch");
  const int d = f.dim();
  double sum = 0.0;
  // Walk the graded blocks: all entries of order n share one weight.
  std::size_t pos = 0;
  for (int n = 0; n <= f.trunc(); ++n) {
    const std::size_t end = basis_size(d, n);
    const double w = std::pow(2.0 * n + d, 2.0 * p.p);
    double block = 0.0;
    for (; pos < end; ++pos) block += f[pos] * g[pos];
    sum += w * block;
  }
  return sum;
}

double sobolev_norm(const CoeffVector& f, SobolevIndex p) {
  return std::sqrt(sobolev_inner(f, f, p));
}

CoeffVector delta_coeffs(const MultiIndex& gamma, const Point& x, int trunc) {
  if (gamma.dim() != x.size()) throw std::invalid_argument("delta_coeffs: dimension mismatch");
  const int d = gamma.dim();
  const MultiIndexSet set(d, trunc);
  std::vector<std::vector<double>> axis(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) axis[a] = hermite_derivative_1d(trunc, gamma[a], x[a]);
  const double sign = gamma.order() % 2 == 0 ? 1.0 : -1.0;
  CoeffVector out(d, trunc);
  for (std::size_t pos = 0; pos < set.size(); ++pos) {
    double v = sign;
    for (int a = 0; a < d; ++a) v *= axis[a][static_cast<std::size_t>(set[pos][a])];
    out[pos] = v;
  }
  return out;
}

CoeffVector project_function(const std::function<double(const Point&)>& f, int trunc,
                             const QuadratureRule& rule) {
  if (rule.order_per_axis < trunc + 1) {
    warn("project_function: rule has " + std::to_string(rule.order_per_axis) +
         " nodes per axis, fewer than N+1 = " + std::to_string(trunc + 1));
  }
  const MultiIndexSet set(rule.dim, trunc);
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(set.size()));
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const Point x = rule.node(i);
    const double fx = f(x);
    if (fx == 0.0) continue;
    acc += (rule.lebesgue_weights[i] * fx) * basis_values(set, x);
  }
  return CoeffVector(rule.dim, trunc, std::move(acc));
}

std::vector<double> membership_profile(const MultiIndex& gamma, const Point& x, double p,
                                       int max_trunc) {
  if (max_trunc < 1) throw std::invalid_argument("membership_profile: N_max < 1");
  const CoeffVector c = delta_coeffs(gamma, x, max_trunc);
  const int d = c.dim();
  std::vector<double> sums;
  sums.reserve(static_cast<std::size_t>(max_trunc));
  double running = 0.0;
  std::size_t pos = 0;
  for (int n = 0; n <= max_trunc; ++n) {
    const std::size_t end = basis_size(d, n);
    const double w = std::pow(2.0 * n + d, -2.0 * p);
    for (; pos < end; ++pos) running += w * c[pos] * c[pos];
    if (n >= 1) sums.push_back(running);
  }
  return sums;
}

double log_increment_slope(const std::vector<double>& partial_sums, int first_n) {
  // partial_sums[i] corresponds to n = i + 1.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  for (std::size_t i = 1; i < partial_sums.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    if (n < first_n) continue;
    const double inc = partial_sums[i] - partial_sums[i - 1];
    if (!(inc > 0.0)) continue;
    const double lx = std::log(static_cast<double>(n));
    const double ly = std::log(inc);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++count;
  }
  if (count < 2) return std::numeric_limits<double>::quiet_NaN();
  const double denom = count * sxx - sx * sx;
  return (count * sxy - sx * sy) / denom;
}

void write_coeff_csv(std::ostream& out, const CoeffVector& v) {
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  out << "dim," << v.dim() << '\n'
      << "trunc," << v.trunc() << '\n'
      << "ordering,graded-lex\n";
  for (std::size_t i = 0; i < v.size(); ++i) out << v[i] << '\n';
  out.precision(old);
}

namespace {

int read_header_int(std::istream& in, const std::string& key) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("coefficient csv: missing " + key);
  const auto comma = line.find(',');
  if (comma == std::string::npos || line.substr(0, comma) != key) {
    throw std::runtime_error("coefficient csv: expected '" + key + ",' header, got '" + line + "'");
  }
  return std::stoi(line.substr(comma + 1));
}

}  // namespace

CoeffVector read_coeff_csv(std::istream& in) {
  const int d = read_header_int(in, "dim");
  const int n = read_header_int(in, "trunc");
  std::string line;
  std::getline(in, line);
  if (line != "ordering,graded-lex") {
    throw std::runtime_error("coefficient csv: unsupported ordering '" + line + "'");
  }
  check_dimension(d, "read_coeff_csv");
  Eigen::VectorXd values(static_cast<Eigen::Index>(basis_size(d, n)));
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (!std::getline(in, line)) throw std::runtime_error("coefficient csv: truncated body");
    values[i] = std::stod(line);
  }
  return CoeffVector(d, n, std::move(values));
}

}  // namespace hermflow
