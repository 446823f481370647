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

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "memprop/builtin_features.hpp"
#include "memprop/clustering.hpp"
#include "memprop/memory.hpp"
#include "memprop/prediction.hpp"

namespace memprop {

enum class ProviderKind { builtin, precomputed };

std::string_view to_string(ProviderKind kind);

struct PipelineConfig {
  MemoryConfig memory;
  double temperature = kDefaultTemperature;
  double lambda = 0.5;
  double zeta = 0.5;
  int grid_cells = 8;  // cells along the shorter side
  int steps = 10;
  double step_size = 0.1;
  ProviderKind provider = ProviderKind::builtin;
  int patch_size = 4;
  // Off reproduces the plain affinity branch alone.
  bool prediction_branch = true;

  void validate() const;
};

/// Parses `key = value` lines; '#' starts a comment. Unknown keys and bad
/// values raise ValidationError.
PipelineConfig parse_config(std::istream& in);
PipelineConfig load_config(const std::filesystem::path& path);

/// Applies one key. Shared by the file parser and the sweep harness.
void set_config_value(PipelineConfig& config, std::string_view key,
                      std::string_view value);

/// Every key in file order, one `key = value` line each.
void write_config(std::ostream& out, const PipelineConfig& config);

}  // namespace memprop
