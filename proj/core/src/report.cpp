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

#include "hermflow/report.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace hermflow {

void VerificationReport::finalize(bool extra_ok) {
  double sum = 0.0;
  max_abs = 0.0;
  bool ok = extra_ok;
  for (const auto& p : series) {
    const double a = std::abs(p.residual);
    sum += p.residual * p.residual;
    max_abs = std::max(max_abs, a);
    if (!(a <= p.bound)) ok = false;
  }
  rms = series.empty() ? 0.0 : std::sqrt(sum / static_cast<double>(series.size()));
  pass = ok;
}

double VerificationReport::diagnostic(const std::string& key) const {
  for (const auto& [k, v] : diagnostics) {
    if (k == key) return v;
  }
  throw std::out_of_range("VerificationReport: no diagnostic '" + key + "'");
}

namespace {

// JSON has no infinity; encode non-finite values as strings.
nlohmann::ordered_json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

std::string VerificationReport::to_json(bool include_timing) const {
  nlohmann::ordered_json j;
  j["identity"] = identity;
  j["scenario"] = scenario;
  j["seed"] = seed;
  auto& p = j["params"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : params) p[k] = number(v);
  auto& s = j["series"] = nlohmann::ordered_json::array();
  for (const auto& pt : series) {
    s.push_back({{"t", number(pt.t)},
                 {"residual", number(pt.residual)},
                 {"sigma", number(pt.sigma)},
                 {"bound", number(pt.bound)}});
  }
  j["summary"] = {{"rms", number(rms)}, {"max", number(max_abs)}, {"tolerance", number(tolerance)}};
  j["pass"] = pass;
  auto& dg = j["diagnostics"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : diagnostics) dg[k] = number(v);
  j["notes"] = notes;
  if (include_timing) j["timing"] = {{"runtime_seconds", runtime_seconds}};
  return j.dump(2);
}

void VerificationReport::write_csv(std::ostream& out) const {
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  out << "t,residual,sigma,bound\n";
  for (const auto& pt : series) {
    out << pt.t << ',' << pt.residual << ',' << pt.sigma << ',' << pt.bound << '\n';
  }
  out.precision(old);
}

}  // namespace hermflow
