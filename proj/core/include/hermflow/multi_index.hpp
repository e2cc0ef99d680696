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

#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace hermflow {

/// A multi-index k = (k_1, ..., k_d) of non-negative integers.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(int dim);
  MultiIndex(std::initializer_list<int> entries);
  explicit MultiIndex(std::vector<int> entries);

  int dim() const { return static_cast<int>(entries_.size()); }
  int order() const;  // |k|
  int operator[](int i) const { return entries_[static_cast<std::size_t>(i)]; }
  int& operator[](int i) { return entries_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& entries() const { return entries_; }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<int> entries_;
};

/// Graded lexicographic order: by |k| first, ties broken by ascending
/// lexicographic comparison of the entries. This ordering is part of the
/// coefficient file format and must not change.
bool graded_lex_less(const MultiIndex& a, const MultiIndex& b);

/// The set { k : |k| <= N } in d dimensions, enumerated in graded-lex order.
class MultiIndexSet {
 public:
  MultiIndexSet(int dim, int trunc);

  int dim() const { return dim_; }
  int trunc() const { return trunc_; }
  std::size_t size() const { return indices_.size(); }

  const MultiIndex& operator[](std::size_t pos) const { return indices_[pos]; }
  int order(std::size_t pos) const { return orders_[pos]; }

  /// Position of k in the enumeration; throws std::out_of_range when
  /// |k| > N or the dimension differs.
  std::size_t position(const MultiIndex& k) const;
  bool contains(const MultiIndex& k) const;

  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

 private:
  std::size_t encode(const MultiIndex& k) const;

  int dim_;
  int trunc_;
  std::vector<MultiIndex> indices_;
  std::vector<int> orders_;
  std::vector<std::size_t> lookup_;  // dense (N+1)^d table, npos when absent
};

/// C(N + d, d): number of multi-indices with |k| <= N.
std::size_t basis_size(int dim, int trunc);

}  // namespace hermflow
