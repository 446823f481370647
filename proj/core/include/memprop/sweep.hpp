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

#include <array>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "memprop/config.hpp"
#include "memprop/sequence.hpp"

namespace memprop {

inline constexpr std::array<double, 5> kBetaGrid{0.05, 0.10, 0.15, 0.20, 0.25};
inline constexpr std::array<double, 5> kGammaGrid{0.75, 0.80, 0.85, 0.90, 0.95};

enum class SweepParam { beta, gamma, both };

SweepParam parse_sweep_param(std::string_view text);

struct SweepCell {
  std::string param;  // "beta" or "gamma"
  double value = 0.0;
  bool ok = false;
  double jf_mean = 0.0;
  double j_mean = 0.0;
  double f_mean = 0.0;
  double pck = 0.0;   // keypoint sequences
  std::string error;  // set when !ok
};

/// Runs one propagation per grid value, the other parameter held at its
/// configured value. A failing cell is recorded and the sweep continues.
std::vector<SweepCell> run_sweep(const SequenceSource& source,
                                 const PipelineConfig& base, SweepParam param);

/// Index of the best successful cell for `param`, or -1.
int best_cell(const std::vector<SweepCell>& cells, std::string_view param);

/// Header plus one row per cell, in grid order.
void write_sweep_csv(std::ostream& out, const std::vector<SweepCell>& cells);

}  // namespace memprop
