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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "memprop/builtin_features.hpp"
#include "memprop/config.hpp"
#include "memprop/feature_map.hpp"
#include "memprop/image.hpp"
#include "memprop/io.hpp"
#include "memprop/label_field.hpp"

namespace memprop {

enum class SequenceMode { color, mask, keypoint };

std::string_view to_string(SequenceMode mode);
SequenceMode parse_sequence_mode(std::string_view text);
LabelKind label_kind_for(SequenceMode mode);

/// A video with its annotations. On disk:
///
///   <dir>/frames/*.png        RGB frames, sorted by file name
///   <dir>/masks/<stem>.png    palette masks (mask mode; the first frame's
///                             mask is required, the rest are ground truth)
///   <dir>/keypoints.txt       keypoint mode; frame 0 seeds, the rest are truth
///   <dir>/features/<stem>.dmpf  precomputed feature maps (optional)
///
/// The mode is mask when masks/ exists, keypoint when keypoints.txt exists,
/// otherwise color.
struct SequenceSource {
  SequenceMode mode = SequenceMode::color;
  std::vector<std::string> frame_names;  // file stems
  std::vector<RgbImage> frames;
  std::map<int, IndexMask> masks;    // by frame index
  KeypointTrack keypoints;           // by frame index
  std::vector<FeatureMap> features;  // empty unless precomputed maps exist

  int size() const { return static_cast<int>(frames.size()); }
  void validate() const;
};

SequenceSource load_sequence(const std::filesystem::path& dir);

/// Writes frames, masks/keypoints and features in the on-disk layout.
void save_sequence(const std::filesystem::path& dir, const SequenceSource& source);

/// Produces the feature map for each frame: the built-in patch descriptor or
/// a precomputed map carried by the source.
class FeatureProvider {
 public:
  static FeatureProvider builtin(DescriptorParams params);
  static FeatureProvider precomputed(std::vector<FeatureMap> maps);
  static FeatureProvider from_config(const PipelineConfig& config,
                                     const SequenceSource& source);

  ProviderKind kind() const { return kind_; }
  FeatureMap features(int frame_index, const RgbImage& frame) const;

 private:
  ProviderKind kind_ = ProviderKind::builtin;
  DescriptorParams params_;
  std::vector<FeatureMap> maps_;
};

}  // namespace memprop
