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

#include "harness/config.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/json_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "harness/scenarios.hpp"

namespace hermflow::harness {

namespace pt = boost::property_tree;

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n\"");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n\"");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cleaned = text;
  std::replace(cleaned.begin(), cleaned.end(), '[', ' ');
  std::replace(cleaned.begin(), cleaned.end(), ']', ' ');
  std::stringstream ss(cleaned);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& field, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("field '" + field + "': expected a number, got '" + text + "'");
  }
}

long long to_integer(const std::string& field, const std::string& text) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("field '" + field + "': expected an integer, got '" + text + "'");
  }
}

bool to_bool(const std::string& field, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError("field '" + field + "': expected a boolean, got '" + text + "'");
}

using Setter = std::function<void(ScenarioConfig&, const std::string& field, const std::string&)>;

Setter real(double ScenarioConfig::*member) {
  return [member](ScenarioConfig& c, const std::string& f, const std::string& v) {
    c.*member = to_double(f, v);
  };
}
Setter integer(int ScenarioConfig::*member) {
  return [member](ScenarioConfig& c, const std::string& f, const std::string& v) {
    c.*member = static_cast<int>(to_integer(f, v));
  };
}
Setter text(std::string ScenarioConfig::*member) {
  return [member](ScenarioConfig& c, const std::string&, const std::string& v) { c.*member = v; };
}
Setter flag(bool ScenarioConfig::*member) {
  return [member](ScenarioConfig& c, const std::string& f, const std::string& v) {
    c.*member = to_bool(f, v);
  };
}
Setter reals(std::vector<double> ScenarioConfig::*member) {
  return [member](ScenarioConfig& c, const std::string& f, const std::string& v) {
    std::vector<double> out;
    for (const auto& item : split_list(v)) out.push_back(to_double(f, item));
    c.*member = out;
  };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"scenario.model", text(&ScenarioConfig::model)},
      {"scenario.lambda", real(&ScenarioConfig::lambda)},
      {"scenario.sigma", real(&ScenarioConfig::sigma)},
      {"scenario.trig_amplitude", real(&ScenarioConfig::trig_amplitude)},
      {"scenario.trig_drift", real(&ScenarioConfig::trig_drift)},
      {"scenario.seed",
       [](ScenarioConfig& c, const std::string& f, const std::string& v) {
         if (!v.empty() && v.front() == '-') throw ConfigError("field '" + f + "': must be non-negative");
         try {
           std::size_t used = 0;
           c.seed = std::stoull(v, &used, 0);
           if (used != v.size()) throw std::invalid_argument(v);
         } catch (const std::exception&) {
           throw ConfigError("field '" + f + "': expected an unsigned integer, got '" + v + "'");
         }
       }},
      {"initial.kind", text(&ScenarioConfig::psi_kind)},
      {"initial.point", real(&ScenarioConfig::psi_point)},
      {"initial.amplitude", real(&ScenarioConfig::psi_amplitude)},
      {"initial.center", real(&ScenarioConfig::psi_center)},
      {"initial.width", real(&ScenarioConfig::psi_width)},
      {"test.phi", text(&ScenarioConfig::phi)},
      {"test.order", integer(&ScenarioConfig::phi_order)},
      {"test.slope", real(&ScenarioConfig::phi_slope)},
      {"test.offset", real(&ScenarioConfig::phi_offset)},
      {"test.amplitude", real(&ScenarioConfig::phi_amplitude)},
      {"test.center", real(&ScenarioConfig::phi_center)},
      {"test.width", real(&ScenarioConfig::phi_width)},
      {"numerics.truncation", integer(&ScenarioConfig::truncation)},
      {"numerics.dt", real(&ScenarioConfig::dt)},
      {"numerics.steps", integer(&ScenarioConfig::steps)},
      {"numerics.paths", integer(&ScenarioConfig::paths)},
      {"numerics.inner_paths", integer(&ScenarioConfig::inner_paths)},
      {"numerics.exact_ou", flag(&ScenarioConfig::exact_ou)},
      {"numerics.control_variate", flag(&ScenarioConfig::control_variate)},
      {"tolerances.allowance_c", real(&ScenarioConfig::allowance_c)},
      {"tolerances.sigma_multiplier", real(&ScenarioConfig::sigma_multiplier)},
      {"tolerances.leakage", real(&ScenarioConfig::leakage_tolerance)},
      {"tolerances.monotonicity", real(&ScenarioConfig::monotonicity_tolerance)},
      {"tolerances.ratio", real(&ScenarioConfig::ratio_tolerance)},
      {"support.radius", real(&ScenarioConfig::support_radius)},
      {"monotonicity.radius", real(&ScenarioConfig::monotonicity_radius)},
      {"monotonicity.trials", integer(&ScenarioConfig::monotonicity_trials)},
      {"tv.levels", integer(&ScenarioConfig::tv_levels)},
      {"tv.index", real(&ScenarioConfig::tv_index)},
      {"tv.control_variate", flag(&ScenarioConfig::tv_control_variate)},
      {"study.dts", reals(&ScenarioConfig::study_dts)},
      {"norms.indices", reals(&ScenarioConfig::norm_indices)},
      {"norms.terms", integer(&ScenarioConfig::norm_terms)},
      {"norms.point", real(&ScenarioConfig::norm_point)},
      {"norms.gamma", integer(&ScenarioConfig::norm_gamma)},
      {"checks.run",
       [](ScenarioConfig& c, const std::string&, const std::string& v) { c.checks = split_list(v); }},
      {"output.dir", text(&ScenarioConfig::out_dir)},
  };
  return table;
}

// JSON arrays arrive as children with empty keys; flatten them to "a, b, c".
std::string leaf_text(const pt::ptree& node) {
  if (node.empty()) return trim(node.data());
  std::string joined;
  for (const auto& [key, child] : node) {
    if (!key.empty() || !child.empty()) return {};
    if (!joined.empty()) joined += ", ";
    joined += trim(child.data());
  }
  return joined;
}

}  // namespace

void ScenarioConfig::validate() const {
  if (!seed) throw ConfigError("missing required field 'scenario.seed'");
  if (!is_registered(model)) throw ConfigError("field 'scenario.model': unknown scenario '" + model + "'");
  auto positive = [](double v, const char* field) {
    if (!(v > 0.0)) throw ConfigError(std::string("field '") + field + "': must be positive");
  };
  positive(dt, "numerics.dt");
  positive(steps, "numerics.steps");
  positive(paths, "numerics.paths");
  positive(inner_paths, "numerics.inner_paths");
  positive(truncation, "numerics.truncation");
  positive(sigma, "scenario.sigma");
  positive(psi_width, "initial.width");
  positive(phi_width, "test.width");
  positive(support_radius, "support.radius");
  positive(monotonicity_radius, "monotonicity.radius");
  positive(monotonicity_trials, "monotonicity.trials");
  positive(allowance_c, "tolerances.allowance_c");
  positive(sigma_multiplier, "tolerances.sigma_multiplier");
  if (lambda < 0.0) throw ConfigError("field 'scenario.lambda': must be non-negative");
  if (tv_levels < 2) throw ConfigError("field 'tv.levels': at least 2 levels are needed");
  if (psi_kind != "delta" && psi_kind != "derivative-delta" && psi_kind != "bump") {
    throw ConfigError("field 'initial.kind': expected delta, derivative-delta or bump");
  }
  if (phi != "h0" && phi != "hermite" && phi != "linear" && phi != "bump") {
    throw ConfigError("field 'test.phi': expected h0, hermite, linear or bump");
  }
  if (phi_order < 0) throw ConfigError("field 'test.order': must be non-negative");
  for (double v : study_dts) positive(v, "study.dts");
  for (const auto& c : checks) {
    if (!is_identity(c)) throw ConfigError("field 'checks.run': unknown identity '" + c + "'");
  }
}

std::uint64_t ScenarioConfig::required_seed() const {
  if (!seed) throw ConfigError("missing required field 'scenario.seed'");
  return *seed;
}

ScenarioConfig parse_config(const std::string& content, bool json) {
  pt::ptree tree;
  std::istringstream in(content);
  try {
    if (json) {
      pt::read_json(in, tree);
    } else {
      pt::read_ini(in, tree);
    }
  } catch (const pt::file_parser_error& e) {
    throw ConfigError(std::string("cannot parse config: ") + e.message() + " (line " +
                      std::to_string(e.line()) + ")");
  }
  const std::string model = tree.get<std::string>("scenario.model", "gaussian");
  ScenarioConfig cfg = is_registered(model) ? default_config(model) : ScenarioConfig{};
  cfg.model = model;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("top-level key '" + section + "' must be inside a section");
    for (const auto& [key, value] : body) {
      const std::string field = section + "." + key;
      const auto it = setters().find(field);
      if (it == setters().end()) throw ConfigError("unknown field '" + field + "'");
      it->second(cfg, field, leaf_text(value));
    }
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string content = buffer.str();
  const auto first = content.find_first_not_of(" \t\r\n");
  const bool json = (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) ||
                    (first != std::string::npos && content[first] == '{');
  return parse_config(content, json);
}

ScenarioConfig default_config(const std::string& model) {
  ScenarioConfig c;
  c.model = model;
  if (model == "ou") {
    c.lambda = 0.8;
    c.sigma = 0.5;
    c.phi = "linear";
  } else if (model == "trig") {
    c.trig_amplitude = 0.5;
  }
  return c;
}

}  // namespace hermflow::harness
