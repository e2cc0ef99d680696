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

#include <functional>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace hermflow {

/// Largest ambient (and noise) dimension supported by tensor grids.
inline constexpr int kMaxDim = 3;

/// A point of R^d, d <= kMaxDim. Stack allocated.
using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;

/// A small d x r matrix (diffusion coefficients, Jacobians, Hessians).
using SmallMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

/// Convenience for one-dimensional callers.
inline Point point1(double x) {
  Point p(1);
  p[0] = x;
  return p;
}

void check_dimension(int d, const char* what);

using WarningHandler = std::function<void(std::string_view)>;

/// Replaces the process-wide warning sink (defaults to std::clog).
/// Passing an empty handler restores the default. Returns the old one.
WarningHandler set_warning_handler(WarningHandler handler);

/// Emits a non-fatal diagnostic (under-resolved quadrature and similar).
void warn(std::string_view message);

}  // namespace hermflow
