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

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "memprop/config.hpp"
#include "memprop/image.hpp"
#include "memprop/io.hpp"
#include "memprop/sequence.hpp"

namespace memprop {

struct FrameScore {
  int frame_index = 0;
  double j = 0.0;
  double f = 0.0;
  std::optional<double> pck;
  double milliseconds = 0.0;
};

struct EvalReport {
  SequenceMode mode = SequenceMode::mask;
  std::vector<FrameScore> frames;
  double j_mean = 0.0;
  double f_mean = 0.0;
  double jf_mean = 0.0;
  double j_recall = 0.0;  // fraction of frames with J > 0.5
  double f_recall = 0.0;
  std::optional<double> pck;  // keypoint mode
  double pck_alpha = 0.1;
  std::optional<PipelineConfig> config;  // echoed by `run`

  /// Fills the means and recalls from `frames`.
  void summarize();
};

constexpr double kRecallThreshold = 0.5;
constexpr double kPckAlpha = 0.1;

/// Scores every frame present in both maps except `skip_frame` (the seed).
EvalReport evaluate_masks(const std::map<int, IndexMask>& pred,
                          const std::map<int, IndexMask>& truth,
                          std::optional<int> skip_frame = 0);
EvalReport evaluate_keypoints(const KeypointTrack& pred, const KeypointTrack& truth,
                              double alpha = kPckAlpha,
                              std::optional<int> skip_frame = 0);

/// Plain `key = value` lines in a fixed order, then one line per frame.
void write_report(std::ostream& out, const EvalReport& report);

}  // namespace memprop
