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

#include "hermflow/common.hpp"

#include <iostream>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace hermflow {

namespace {

std::mutex& warning_mutex() {
  static std::mutex m;
  return m;
}

WarningHandler& warning_handler() {
  static WarningHandler handler;
  return handler;
}

}  // namespace

void check_dimension(int d, const char* what) {
  if (d < 1 || d > kMaxDim) {
    throw std::invalid_argument(std::string(what) + ": dimension " +
                                std::to_string(d) +
                                " outside supported range 1.." +
                                std::to_string(kMaxDim));
  }
}

WarningHandler set_warning_handler(WarningHandler handler) {
  std::lock_guard lock(warning_mutex());
  return std::exchange(warning_handler(), std::move(handler));
}

void warn(std::string_view message) {
  std::lock_guard lock(warning_mutex());
  if (warning_handler()) {
    warning_handler()(message);
  } else {
    std::clog << "hermflow: warning: " << message << '\n';
  }
}

}  // namespace hermflow
