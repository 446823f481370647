// Copyright 2026 The memprop Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "memprop/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "memprop/errors.hpp"

namespace memprop {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view value) {
  // std::from_chars for double is unavailable on older libstdc++.
  std::string text(value);
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) {
    throw ValidationError("config key '" + std::string(key) + "' expects a number, got '" +
                          text + "'");
  }
  return out;
}

int parse_int(std::string_view key, std::string_view value) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ValidationError("config key '" + std::string(key) +
                          "' expects an integer, got '" + std::string(value) + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "on" || value == "true" || value == "1") return true;
  if (value == "off" || value == "false" || value == "0") return false;
  throw ValidationError("config key '" + std::string(key) + "' expects on/off, got '" +
                        std::string(value) + "'");
}

}  // namespace

std::string_view to_string(ProviderKind kind) {
  return kind == ProviderKind::builtin ? "builtin" : "precomputed";
}

void PipelineConfig::validate() const {
  memory.validate();
  if (!(temperature > 0.0)) throw ValidationError("temperature must be positive");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ValidationError("lambda must lie in [0, 1]");
  if (zeta < 0.0) throw ValidationError("zeta must be non-negative");
  if (grid_cells < 1) throw ValidationError("grid_cells must be at least 1");
  if (steps < 0) throw ValidationError("steps must be non-negative");
  if (!(step_size > 0.0)) throw ValidationError("step_size must be positive");
  if (patch_size < 1) throw ValidationError("patch_size must be at least 1");
}

void set_config_value(PipelineConfig& config, std::string_view key,
                      std::string_view value) {
  if (key == "beta") {
    config.memory.beta = parse_double(key, value);
  } else if (key == "gamma") {
    config.memory.gamma = parse_double(key, value);
  } else if (key == "short_capacity") {
    config.memory.short_capacity = parse_int(key, value);
  } else if (key == "long_capacity") {
    config.memory.long_capacity = parse_int(key, value);
  } else if (key == "long_min_gap") {
    config.memory.long_min_gap = parse_int(key, value);
  } else if (key == "pruning") {
    const PruningPolicy p = parse_pruning_policy(value);
    config.memory.short_pruning = p;
    config.memory.long_pruning = p;
  } else if (key == "short_pruning") {
    config.memory.short_pruning = parse_pruning_policy(value);
  } else if (key == "long_pruning") {
    config.memory.long_pruning = parse_pruning_policy(value);
  } else if (key == "long_term") {
    config.memory.long_term_enabled = parse_bool(key, value);
  } else if (key == "temperature") {
    config.temperature = parse_double(key, value);
  } else if (key == "lambda") {
    config.lambda = parse_double(key, value);
  } else if (key == "zeta") {
    config.zeta = parse_double(key, value);
  } else if (key == "grid_cells") {
    config.grid_cells = parse_int(key, value);
  } else if (key == "steps") {
    config.steps = parse_int(key, value);
  } else if (key == "step_size") {
    config.step_size = parse_double(key, value);
  } else if (key == "provider") {
    if (value == "builtin") {
      config.provider = ProviderKind::builtin;
    } else if (value == "precomputed") {
      config.provider = ProviderKind::precomputed;
    } else {
      throw ValidationError("unknown provider '" + std::string(value) + "'");
    }
  } else if (key == "patch_size") {
    config.patch_size = parse_int(key, value);
  } else if (key == "prediction_branch") {
    config.prediction_branch = parse_bool(key, value);
  } else {
    throw ValidationError("unknown config key '" + std::string(key) + "'");
  }
}

PipelineConfig parse_config(std::istream& in) {
  PipelineConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError("config line " + std::to_string(line_no) +
                            " is not 'key = value'");
    }
    set_config_value(config, trim(view.substr(0, eq)), trim(view.substr(eq + 1)));
  }
  config.validate();
  return config;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  return parse_config(in);
}

void write_config(std::ostream& out, const PipelineConfig& config) {
  const auto& m = config.memory;
  out << "beta = " << m.beta << '\n'
      << "gamma = " << m.gamma << '\n'
      << "short_capacity = " << m.short_capacity << '\n'
      << "long_capacity = " << m.long_capacity << '\n'
      << "long_min_gap = " << m.long_min_gap << '\n'
      << "short_pruning = " << to_string(m.short_pruning) << '\n'
      << "long_pruning = " << to_string(m.long_pruning) << '\n'
      << "long_term = " << (m.long_term_enabled ? "on" : "off") << '\n'
      << "temperature = " << config.temperature << '\n'
      << "lambda = " << config.lambda << '\n'
      << "zeta = " << config.zeta << '\n'
      << "grid_cells = " << config.grid_cells << '\n'
      << "steps = " << config.steps << '\n'
      << "step_size = " << config.step_size << '\n'
      << "provider = " << to_string(config.provider) << '\n'
      << "patch_size = " << config.patch_size << '\n'
      << "prediction_branch = " << (config.prediction_branch ? "on" : "off") << '\n';
}

}  // namespace memprop
