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

#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "hermflow/parallel.hpp"
#include "hermflow/rng.hpp"

namespace hermflow {
namespace {

// Known-answer vectors published with Random123 for Philox4x32-10.
TEST(Philox, KnownAnswers) {
  using C = Philox4x32::Counter;
  EXPECT_EQ(Philox4x32(0)(C{0, 0, 0, 0}), (C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(Philox4x32(0xffffffffffffffffULL)(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}),
            (C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(Philox4x32(0x299f31d0a4093822ULL)(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}),
            (C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(NormalStream, IndexedAccessIsOrderIndependent) {
  NormalStream a(42, 7);
  NormalStream b(42, 7);
  const double late = b.normal(1001);
  std::vector<double> seq;
  for (int i = 0; i < 1002; ++i) seq.push_back(a.next_normal());
  EXPECT_EQ(seq[1001], late);
  EXPECT_EQ(seq[5], b.normal(5));
}

TEST(NormalStream, StreamsAreDistinct) {
  std::set<std::uint64_t> ids;
  for (std::uint64_t a = 0; a < 50; ++a) {
    for (std::uint64_t b = 0; b < 50; ++b) ids.insert(derive_stream(9, "x", a, b));
  }
  ids.insert(derive_stream(9, "y"));
  ids.insert(derive_stream(10, "x"));
  EXPECT_EQ(ids.size(), 2502u);
  EXPECT_NE(NormalStream(1, 2).normal(0), NormalStream(1, 3).normal(0));
}

TEST(NormalStream, Moments) {
  NormalStream s(11, derive_stream(11, "moments"));
  const int n = 400000;
  double m = 0.0, v = 0.0, k = 0.0, c = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = s.normal(static_cast<std::uint64_t>(i));
    m += x;
    v += x * x;
    k += x * x * x * x;
    if (i % 2 == 1) c += x * s.normal(static_cast<std::uint64_t>(i - 1));
  }
  const double se = 1.0 / std::sqrt(n);
  EXPECT_LT(std::abs(m / n), 5.0 * se);
  EXPECT_LT(std::abs(v / n - 1.0), 5.0 * std::sqrt(2.0) * se);
  EXPECT_LT(std::abs(k / n - 3.0), 5.0 * std::sqrt(96.0) * se);
  EXPECT_LT(std::abs(c / (n / 2)), 5.0 * std::sqrt(2.0) * se);
}

TEST(NormalStream, UniformInUnitInterval) {
  NormalStream s(3, 4);
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const double u = s.uniform(i);
    EXPECT_GT(u, 0.0);
    EXPECT_LE(u, 1.0);
  }
}

TEST(Parallel, VisitsEveryIndexOnceAndNests) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) {
    std::vector<int> inner(4, 0);
    parallel_for(inner.size(), [&](std::size_t j) { inner[j] = 1; });
    hits[i] += inner[0] + inner[1] + inner[2] + inner[3];
  });
  for (int h : hits) EXPECT_EQ(h, 4);
  EXPECT_GE(thread_count(), 1);
}

}  // namespace
}  // namespace hermflow
