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

#include "hermflow/operator_matrix.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "hermflow/sobolev.hpp"

namespace hermflow {

std::string to_string(OperatorTag tag) {
  switch (tag) {
    case OperatorTag::Diffusion: return "A";
    case OperatorTag::Generator: return "L";
    case OperatorTag::Derivative: return "derivative";
    case OperatorTag::Position: return "position";
  }
  return "unknown";
}

namespace {

OperatorTag tag_from_string(const std::string& s) {
  if (s == "A") return OperatorTag::Diffusion;
  if (s == "L") return OperatorTag::Generator;
  if (s == "derivative") return OperatorTag::Derivative;
  if (s == "position") return OperatorTag::Position;
  throw std::runtime_error("operator csv: unknown tag '" + s + "'");
}

// Coefficient (up, down) for the ladder image of h_k along one axis.
std::pair<double, double> ladder_coefficients(LadderKind kind, int k) {
  const double up = std::sqrt((k + 1) / 2.0);
  const double down = std::sqrt(k / 2.0);
  return kind == LadderKind::Multiply ? std::pair{up, down} : std::pair{-up, down};
}

}  // namespace

CoeffVector OperatorMatrix::apply(const CoeffVector& phi) const {
  if (phi.dim() != dim || phi.trunc() != domain_trunc) {
    throw std::invalid_argument("OperatorMatrix::apply: shape mismatch");
  }
  return CoeffVector(dim, range_trunc, matrix * phi.values());
}

OperatorMatrix ladder_matrix(LadderKind kind, int axis, int trunc, int dim) {
  if (trunc < 1) throw std::invalid_argument("ladder_matrix: N must be >= 1");
  if (axis < 0 || axis >= dim) throw std::invalid_argument("ladder_matrix: invalid axis");
  const MultiIndexSet set(dim, trunc);
  OperatorMatrix m;
  m.tag = kind == LadderKind::Multiply ? OperatorTag::Position : OperatorTag::Derivative;
  m.axis = axis;
  m.dim = dim;
  m.domain_trunc = trunc;
  m.range_trunc = trunc;
  const auto n = static_cast<Eigen::Index>(set.size());
  m.matrix = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t col = 0; col < set.size(); ++col) {
    const MultiIndex& l = set[col];
    const auto [up, down] = ladder_coefficients(kind, l[axis]);
    if (l.order() < trunc) {
      MultiIndex k = l;
      k[axis] += 1;
      m.matrix(static_cast<Eigen::Index>(set.position(k)), static_cast<Eigen::Index>(col)) = up;
    }
    if (l[axis] > 0) {
      MultiIndex k = l;
      k[axis] -= 1;
      m.matrix(static_cast<Eigen::Index>(set.position(k)), static_cast<Eigen::Index>(col)) = down;
    }
  }
  return m;
}

double ladder_edge_mass(LadderKind kind, int axis, const CoeffVector& phi) {
  if (axis < 0 || axis >= phi.dim()) throw std::invalid_argument("ladder_edge_mass: invalid axis");
  const MultiIndexSet set(phi.dim(), phi.trunc());
  // Each l with |l| = N sends sqrt((l_i+1)/2) phi_l onto a distinct h_{l+e_i}.
  double mass = 0.0;
  for (std::size_t pos = 0; pos < set.size(); ++pos) {
    if (set.order(pos) != phi.trunc()) continue;
    const double up = ladder_coefficients(kind, set[pos][axis]).first;
    mass += up * up * phi[pos] * phi[pos];
  }
  return mass;
}

void write_operator_csv(std::ostream& out, const OperatorMatrix& m) {
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  out << "dim," << m.dim << '\n'
      << "trunc," << m.domain_trunc << '\n'
      << "ordering,graded-lex\n"
      << "tag," << to_string(m.tag) << '\n'
      << "axis," << m.axis << '\n'
      << "rows," << m.matrix.rows() << '\n'
      << "cols," << m.matrix.cols() << '\n'
      << "range_trunc," << m.range_trunc << '\n'
      << "row,col,value\n";
  for (Eigen::Index c = 0; c < m.matrix.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.matrix.rows(); ++r) {
      if (m.matrix(r, c) != 0.0) out << r << ',' << c << ',' << m.matrix(r, c) << '\n';
    }
  }
  out.precision(old);
}

OperatorMatrix read_operator_csv(std::istream& in) {
  auto field = [&](const std::string& key) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("operator csv: missing " + key);
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.substr(0, comma) != key) {
      throw std::runtime_error("operator csv: expected '" + key + "', got '" + line + "'");
    }
    return line.substr(comma + 1);
  };
  OperatorMatrix m;
  m.dim = std::stoi(field("dim"));
  m.domain_trunc = std::stoi(field("trunc"));
  if (field("ordering") != "graded-lex") throw std::runtime_error("operator csv: bad ordering");
  m.tag = tag_from_string(field("tag"));
  m.axis = std::stoi(field("axis"));
  const auto rows = std::stol(field("rows"));
  const auto cols = std::stol(field("cols"));
  m.range_trunc = std::stoi(field("range_trunc"));
  std::string line;
  std::getline(in, line);
  if (line != "row,col,value") throw std::runtime_error("operator csv: missing triplet header");
  m.matrix = Eigen::MatrixXd::Zero(rows, cols);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
      throw std::runtime_error("operator csv: malformed triplet '" + line + "'");
    }
    const long r = std::stol(line.substr(0, c1));
    const long c = std::stol(line.substr(c1 + 1, c2 - c1 - 1));
    if (r < 0 || r >= rows || c < 0 || c >= cols) throw std::runtime_error("operator csv: index out of range");
    m.matrix(r, c) = std::stod(line.substr(c2 + 1));
  }
  return m;
}

}  // namespace hermflow
