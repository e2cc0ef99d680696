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

#include <array>
#include <cstdint>
#include <string_view>

namespace hermflow {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Stateless:
/// the output block is a pure function of (key, counter), so any draw can be
/// reproduced without replaying the stream that precedes it.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit Philox4x32(std::uint64_t seed);

  Counter operator()(Counter counter) const;

 private:
  Key key_;
};

/// 64-bit finalizer used to derive stream identifiers.
std::uint64_t mix64(std::uint64_t x);

/// Stream id for (parent, purpose tag, a, b). Distinct purposes and indices
/// give unrelated streams, so nested simulations never share randomness.
std::uint64_t derive_stream(std::uint64_t parent, std::string_view purpose,
                            std::uint64_t a = 0, std::uint64_t b = 0);

/// Standard normals indexed by position within one (seed, stream) pair.
/// normal(i) is independent of evaluation order.
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t stream);

  double normal(std::uint64_t index) const;
  /// Uniform on (0, 1], indexed like normal().
  double uniform(std::uint64_t index) const;

  /// Sequential convenience: returns normal(cursor++).
  double next_normal() { return normal(cursor_++); }
  double next_uniform() { return uniform(cursor_++); }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  Philox4x32 engine_;
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t cursor_ = 0;
};

}  // namespace hermflow
