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

#include "hermflow/multi_index.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "hermflow/common.hpp"

namespace hermflow {

namespace {
constexpr std::size_t kAbsent = std::numeric_limits<std::size_t>::max();
}

MultiIndex::MultiIndex(int dim) : entries_(static_cast<std::size_t>(dim), 0) {}

MultiIndex::MultiIndex(std::initializer_list<int> entries)
    : MultiIndex(std::vector<int>(entries)) {}

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
  for (int e : entries_) {
    if (e < 0) throw std::invalid_argument("MultiIndex: negative entry");
  }
}

int MultiIndex::order() const {
  return std::accumulate(entries_.begin(), entries_.end(), 0);
}

bool graded_lex_less(const MultiIndex& a, const MultiIndex& b) {
  const int oa = a.order();
  const int ob = b.order();
  if (oa != ob) return oa < ob;
  return a.entries() < b.entries();
}

std::size_t basis_size(int dim, int trunc) {
  // C(N+d, d) computed incrementally; exact for the sizes we allow.
  std::size_t result = 1;
  for (int i = 1; i <= dim; ++i) {
    result = result * static_cast<std::size_t>(trunc + i) / static_cast<std::size_t>(i);
  }
  return result;
}

MultiIndexSet::MultiIndexSet(int dim, int trunc) : dim_(dim), trunc_(trunc) {
  check_dimension(dim, "MultiIndexSet");
  if (trunc < 0) throw std::invalid_argument("MultiIndexSet: negative truncation");

  std::size_t table = 1;
  for (int i = 0; i < dim; ++i) table *= static_cast<std::size_t>(trunc + 1);
  lookup_.assign(table, kAbsent);

  indices_.reserve(basis_size(dim, trunc));
  // Odometer over the box [0,N]^d keeping |k| <= N; sorted afterwards.
  std::vector<int> k(static_cast<std::size_t>(dim), 0);
  while (true) {
    if (std::accumulate(k.begin(), k.end(), 0) <= trunc) indices_.emplace_back(k);
    int axis = dim - 1;
    while (axis >= 0 && k[static_cast<std::size_t>(axis)] == trunc) {
      k[static_cast<std::size_t>(axis)] = 0;
      --axis;
    }
    if (axis < 0) break;
    ++k[static_cast<std::size_t>(axis)];
  }
  std::sort(indices_.begin(), indices_.end(), graded_lex_less);

  orders_.resize(indices_.size());
  for (std::size_t pos = 0; pos < indices_.size(); ++pos) {
    orders_[pos] = indices_[pos].order();
    lookup_[encode(indices_[pos])] = pos;
  }
}

std::size_t MultiIndexSet::encode(const MultiIndex& k) const {
  std::size_t code = 0;
  for (int i = 0; i < dim_; ++i) {
    code = code * static_cast<std::size_t>(trunc_ + 1) + static_cast<std::size_t>(k[i]);
  }
  return code;
}

bool MultiIndexSet::contains(const MultiIndex& k) const {
  if (k.dim() != dim_) return false;
  for (int e : k.entries()) {
    if (e > trunc_) return false;
  }
  return lookup_[encode(k)] != kAbsent;
}

std::size_t MultiIndexSet::position(const MultiIndex& k) const {
  if (!contains(k)) {
    throw std::out_of_range("MultiIndexSet: index not in truncated set (N=" +
                            std::to_string(trunc_) + ")");
  }
  return lookup_[encode(k)];
}

}  // namespace hermflow
